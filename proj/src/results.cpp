// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#include "fasisac/results.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fasisac {

std::string format_cell(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) {
        if (std::isnan(*d)) return "nan";
        if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.9g", *d);
        return buf;
    }
    if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
    return std::get<std::string>(cell);
}

void ResultTable::add_row(const std::vector<Cell>& cells) {
    if (cells.size() != columns.size()) throw std::invalid_argument("ResultTable: row width does not match the header");
    std::vector<std::string> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(format_cell(c));
    rows.push_back(std::move(row));
}

std::size_t ResultTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    throw std::out_of_range("ResultTable: no column '" + name + "'");
}

const std::string& ResultTable::at(std::size_t row, const std::string& name) const { return rows.at(row).at(column(name)); }

double ResultTable::real(std::size_t row, const std::string& name) const {
    const std::string& s = at(row, name);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') throw std::invalid_argument("ResultTable: '" + s + "' in column " + name + " is not numeric");
    return v;
}

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void write_record(const std::vector<std::string>& fields, std::ostream& out) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << quote(fields[i]);
    }
    out << '\n';
}

// Reads one record starting at `pos`; quoted fields may span lines.
std::vector<std::string> read_record(const std::string& text, std::size_t& pos) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    while (pos < text.size()) {
        const char c = text[pos++];
        if (quoted) {
            if (c == '"') {
                if (pos < text.size() && text[pos] == '"') {
                    field += '"';
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            field += c;
        }
    }
    if (quoted) throw std::invalid_argument("CSV: unterminated quoted field");
    fields.push_back(std::move(field));
    return fields;
}

} // namespace

void write_csv(const ResultTable& table, std::ostream& out) {
    for (const auto& [key, value] : table.metadata) out << "# " << key << ": " << value << '\n';
    write_record(table.columns, out);
    for (const auto& row : table.rows) write_record(row, out);
}

std::string render_csv(const ResultTable& table) {
    std::ostringstream out;
    write_csv(table, out);
    return out.str();
}

void emit_csv(const ResultTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing: " + std::strerror(errno));
    write_csv(table, out);
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

ResultTable parse_csv(const std::string& text) {
    ResultTable table;
    std::size_t pos = 0;
    while (pos < text.size() && text[pos] == '#') {
        const auto eol = text.find('\n', pos);
        std::string line = text.substr(pos + 1, (eol == std::string::npos ? text.size() : eol) - pos - 1);
        pos = eol == std::string::npos ? text.size() : eol + 1;
        if (!line.empty() && line.front() == ' ') line.erase(0, 1);
        const auto colon = line.find(": ");
        if (colon == std::string::npos) {
            table.metadata.emplace_back(line, "");
        } else {
            table.metadata.emplace_back(line.substr(0, colon), line.substr(colon + 2));
        }
    }
    if (pos >= text.size()) throw std::invalid_argument("CSV: missing header row");
    table.columns = read_record(text, pos);
    while (pos < text.size()) {
        auto row = read_record(text, pos);
        if (row.size() != table.columns.size()) throw std::invalid_argument("CSV: row width does not match the header");
        table.rows.push_back(std::move(row));
    }
    return table;
}

ResultTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_csv(text.str());
}

} // namespace fasisac
