// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#include "fasisac/mra.hpp"

#include <algorithm>
#include <bitset>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "fasisac/parallel.hpp"

namespace fasisac {

std::vector<int> WeightFunction::support() const {
    std::vector<int> out;
    for (int x = -max_lag_; x <= max_lag_; ++x) {
        if ((*this)(x) > 0) out.push_back(x);
    }
    return out;
}

std::vector<int> WeightFunction::holes() const {
    std::vector<int> out;
    for (int x = -max_lag_; x <= max_lag_; ++x) {
        if ((*this)(x) == 0) out.push_back(x);
    }
    return out;
}

WeightFunction dca(const PortPattern& pattern) {
    const int lag = pattern.aperture();
    std::vector<int> counts(static_cast<std::size_t>(2 * lag + 1), 0);
    for (int a : pattern.indices()) {
        for (int b : pattern.indices()) ++counts[static_cast<std::size_t>(a - b + lag)];
    }
    return {lag, std::move(counts)};
}

MraCheck check_mra(const PortPattern& pattern) {
    MraCheck out;
    const int m = pattern.size();
    if (!pattern.anchored()) out.violations.push_back("first index is not 0");

    const WeightFunction w = dca(pattern);
    const int a = pattern.aperture();
    for (int x = 0; x <= a; ++x) {
        if (w(x) == 0) out.holes.push_back(x);
    }
    if (!out.holes.empty()) out.violations.push_back("co-array has holes");

    if (w(0) != m) out.violations.push_back("w(0) != M");
    long off_origin = 0;
    for (int x = -a; x <= a; ++x) {
        if (w(x) != w(-x)) {
            out.violations.push_back("w(x) != w(-x) at x = " + std::to_string(x));
            break;
        }
        if (x == 0 || w(x) == 0) continue;
        off_origin += w(x);
        if (w(x) > m - 1) out.violations.push_back("w(" + std::to_string(x) + ") exceeds M - 1");
    }
    if (off_origin != static_cast<long>(m) * (m - 1)) out.violations.push_back("off-origin weights do not sum to M(M-1)");

    out.ok = out.violations.empty();
    return out;
}

int default_aperture_cap(int m) { return m * (m - 1) / 2; }

namespace {

constexpr int kMaxSearchAperture = 255;
using LagSet = std::bitset<kMaxSearchAperture + 1>;

// Depth-first enumeration of hole-free rulers {0, 1, x_2, ..., x_{m-2}, A}.
// Mirror symmetry is broken by fixing x_1 = 1 (every hole-free ruler holds 1
// or A-1) and bounding all interior marks by A - 1; mirrors are added later.
class RulerSearch {
public:
    RulerSearch(int m, int aperture) : m_(m), a_(aperture) {}

    std::vector<std::vector<int>> run_branch(int second_mark) const {
        std::vector<std::vector<int>> hits;
        std::vector<int> marks = {0, 1, a_};
        LagSet covered;
        for (int lag : {0, 1, a_ - 1, a_}) covered.set(static_cast<std::size_t>(lag));
        if (m_ == 3) {
            if (static_cast<int>(covered.count()) - 1 == a_) hits.push_back({0, 1, a_});
            return hits;
        }
        extend(marks, covered, second_mark, hits);
        return hits;
    }

    [[nodiscard]] int interior() const { return m_ - 2; }

private:
    // Places mark `p`, then recurses on later positions.
    void extend(std::vector<int>& marks, LagSet covered, int p, std::vector<std::vector<int>>& hits) const {
        for (int q : marks) covered.set(static_cast<std::size_t>(std::abs(p - q)));
        marks.push_back(p);
        const int placed_interior = static_cast<int>(marks.size()) - 2;  // excludes 0 and A
        const int remaining = interior() - placed_interior;
        const int missing = a_ + 1 - static_cast<int>(covered.count());
        if (remaining == 0) {
            if (missing == 0) {
                std::vector<int> sorted = marks;
                std::sort(sorted.begin(), sorted.end());
                hits.push_back(std::move(sorted));
            }
        } else {
            const auto n_placed = static_cast<long>(marks.size());
            const long reachable = remaining * n_placed + remaining * (remaining - 1L) / 2;
            if (missing <= reachable) {
                for (int next = p + 1; next <= a_ - 1 - (remaining - 1); ++next) extend(marks, covered, next, hits);
            }
        }
        marks.pop_back();
    }

    int m_;
    int a_;
};

std::vector<PortPattern> rulers_with_aperture(int m, int aperture) {
    if (m == 1) return aperture == 0 ? std::vector<PortPattern>{PortPattern{0}} : std::vector<PortPattern>{};
    if (m == 2) return aperture == 1 ? std::vector<PortPattern>{PortPattern{0, 1}} : std::vector<PortPattern>{};
    if (aperture < m - 1 || aperture < 2) return {};

    const RulerSearch search(m, aperture);
    std::vector<std::vector<std::vector<int>>> per_branch;
    if (m == 3) {
        per_branch.push_back(search.run_branch(0));
    } else {
        const int first = 2;
        const int last = aperture - 1 - (m - 4);
        const int branches = std::max(0, last - first + 1);
        per_branch.resize(static_cast<std::size_t>(branches));
        parallel_for(branches, [&](std::int64_t b) {
            per_branch[static_cast<std::size_t>(b)] = search.run_branch(first + static_cast<int>(b));
        });
    }

    std::vector<PortPattern> out;
    for (const auto& branch : per_branch) {
        for (const auto& marks : branch) {
            PortPattern pattern(marks);
            out.push_back(pattern);
            PortPattern mirror = pattern.mirrored();
            if (mirror != pattern) out.push_back(std::move(mirror));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace

std::vector<PortPattern> mra_search(int m, int aperture_cap, const MraSearchOptions& options) {
    if (m < 1) throw std::invalid_argument("mra_search: m must be >= 1");
    if (m > 11) throw std::invalid_argument("mra_search: m > 11 is outside the supported search range");
    if (m > 8 && !options.allow_large) {
        throw std::invalid_argument("mra_search: m > 8 requires the full-search option");
    }
    if (aperture_cap < m - 1) throw std::invalid_argument("mra_search: aperture cap admits no array");
    if (aperture_cap > kMaxSearchAperture) throw std::invalid_argument("mra_search: aperture cap too large");

    // A hole-free ruler with m marks covers at most m(m-1)/2 lags.
    const int start = std::min(aperture_cap, std::max(m - 1, default_aperture_cap(m)));
    for (int a = start; a >= m - 1; --a) {
        auto hits = rulers_with_aperture(m, a);
        if (!hits.empty()) return hits;
    }
    throw std::invalid_argument("mra_search: aperture cap admits no array");
}

double expected_index_gap(const PortPattern& pattern) {
    long total = 0;
    for (int a : pattern.indices()) {
        for (int b : pattern.indices()) total += std::abs(a - b);
    }
    const double m = pattern.size();
    return static_cast<double>(total) / (m * m);
}

double lambda_bar_sq(const PortPattern& pattern, double aperture, int num_ports) {
    if (num_ports < 2) throw std::invalid_argument("lambda_bar_sq: need at least two ports");
    const double lambda = 2.0 * std::numbers::pi * expected_index_gap(pattern) * aperture / (num_ports - 1);
    return lambda * lambda;
}

const std::vector<KnownArray>& known_arrays() {
    static const std::vector<KnownArray> table = {
        {3, {0, 1, 3}, 1.3333},
        {3, {0, 2, 3}, 1.3333},
        {5, {0, 1, 4, 7, 9}, 3.84},
        {5, {0, 1, 2, 6, 9}, 3.68},
        {7, {0, 1, 2, 6, 10, 14, 17}, 6.9388},
        {7, {0, 1, 2, 3, 8, 13, 17}, 6.6122},
        {9, {0, 1, 2, 14, 18, 21, 24, 27, 29}, 12.0988},
        {9, {0, 1, 3, 10, 16, 22, 24, 27, 29}, 12.2469},
        {10, {0, 1, 3, 6, 13, 20, 27, 31, 35, 36}, 15.44},
        {11, {0, 1, 3, 6, 13, 20, 27, 34, 38, 42, 43}, 18.314},
    };
    return table;
}

PortPattern default_array(int m) {
    for (const auto& known : known_arrays()) {
        if (known.m == m && check_mra(known.pattern).ok) return known.pattern;
    }
    MraSearchOptions options;
    options.allow_large = true;
    return mra_search(m, default_aperture_cap(m), options).front();
}

} // namespace fasisac
