// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#ifndef FASISAC_PORTS_HPP
#define FASISAC_PORTS_HPP

#include <initializer_list>
#include <string>
#include <vector>

namespace fasisac {

/// Strictly increasing, nonempty set of fluid-antenna port indices.
///
/// Arrays produced by the MRA search are anchored at 0; patterns returned by
/// optimal selection need not be.
class PortPattern {
public:
    explicit PortPattern(std::vector<int> indices);
    PortPattern(std::initializer_list<int> indices) : PortPattern(std::vector<int>(indices)) {}

    [[nodiscard]] const std::vector<int>& indices() const { return indices_; }
    [[nodiscard]] int size() const { return static_cast<int>(indices_.size()); }
    [[nodiscard]] int operator[](int i) const { return indices_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] int front() const { return indices_.front(); }
    [[nodiscard]] int back() const { return indices_.back(); }
    [[nodiscard]] int aperture() const { return back() - front(); }
    [[nodiscard]] bool anchored() const { return front() == 0; }
    /// Pattern reflected inside its own aperture (x -> max - x).
    [[nodiscard]] PortPattern mirrored() const;
    /// "[0,1,3]"
    [[nodiscard]] std::string to_string() const;

    static PortPattern parse(const std::string& text);
    static PortPattern contiguous(int m);

    friend bool operator==(const PortPattern&, const PortPattern&) = default;
    friend auto operator<=>(const PortPattern& a, const PortPattern& b) { return a.indices_ <=> b.indices_; }

private:
    std::vector<int> indices_;
};

} // namespace fasisac

#endif // FASISAC_PORTS_HPP
