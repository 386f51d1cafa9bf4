// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#ifndef FASISAC_RESULTS_HPP
#define FASISAC_RESULTS_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fasisac {

constexpr const char* kArtifactVersion = "fasisac 1.0.0";

/// A value as it enters a table; reals are rendered with 9 significant digits.
using Cell = std::variant<double, long long, std::string>;

std::string format_cell(const Cell& cell);

/// Named columns of rendered cells plus leading metadata lines.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;

    void add_row(const std::vector<Cell>& cells);
    [[nodiscard]] std::size_t column(const std::string& name) const;
    [[nodiscard]] const std::string& at(std::size_t row, const std::string& name) const;
    [[nodiscard]] double real(std::size_t row, const std::string& name) const;
    bool operator==(const ResultTable&) const = default;
};

/// '#'-prefixed "key: value" metadata, header, then rows; RFC 4180 quoting.
void write_csv(const ResultTable& table, std::ostream& out);
std::string render_csv(const ResultTable& table);
void emit_csv(const ResultTable& table, const std::string& path);

ResultTable parse_csv(const std::string& text);
ResultTable read_csv(const std::string& path);

} // namespace fasisac

#endif // FASISAC_RESULTS_HPP
