// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fasisac/mra.hpp"
#include "fasisac/ports.hpp"

using namespace fasisac;

namespace {

bool contains(const std::vector<PortPattern>& v, const PortPattern& p) { return std::find(v.begin(), v.end(), p) != v.end(); }

// Brute force over all subsets of [0, a] containing 0 and a.
std::vector<PortPattern> brute_force_rulers(int m, int a) {
    std::vector<PortPattern> out;
    const int inner = a - 1;
    for (unsigned mask = 0; mask < (1u << inner); ++mask) {
        if (__builtin_popcount(mask) != m - 2) continue;
        std::vector<int> idx = {0};
        for (int b = 0; b < inner; ++b) {
            if (mask & (1u << b)) idx.push_back(b + 1);
        }
        idx.push_back(a);
        const PortPattern p(idx);
        if (check_mra(p).holes.empty()) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("port patterns validate and format") {
    const PortPattern p{0, 1, 3};
    CHECK(p.size() == 3);
    CHECK(p.aperture() == 3);
    CHECK(p.to_string() == "[0,1,3]");
    CHECK(PortPattern::parse("[0, 2,3]") == PortPattern{0, 2, 3});
    CHECK(p.mirrored() == PortPattern{0, 2, 3});
    CHECK(PortPattern::contiguous(4) == PortPattern{0, 1, 2, 3});
    CHECK_THROWS_AS(PortPattern({1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(PortPattern({2, 1}), std::invalid_argument);
    CHECK_THROWS_AS(PortPattern({-1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(PortPattern(std::vector<int>{}), std::invalid_argument);
    CHECK_THROWS(PortPattern::parse("[0,x]"));
}

TEST_CASE("difference co-array weights") {
    const WeightFunction w = dca({0, 1, 3});
    CHECK(w(0) == 3);
    for (int x : {1, 2, 3}) {
        CHECK(w(x) == 1);
        CHECK(w(-x) == 1);
    }
    CHECK(w(4) == 0);
    CHECK(w.holes().empty());

    const WeightFunction single = dca({0});
    CHECK(single(0) == 1);
    CHECK(single.support() == std::vector<int>{0});

    for (const auto& known : known_arrays()) {
        const WeightFunction wk = dca(known.pattern);
        long off = 0;
        for (int x : wk.support()) {
            if (x != 0) off += wk(x);
        }
        CHECK(off == static_cast<long>(known.m) * (known.m - 1));
    }
}

TEST_CASE("check_mra accepts hole-free arrays and explains rejections") {
    CHECK(check_mra({0, 1, 3}).ok);
    CHECK(check_mra({0, 1, 4, 7, 9}).ok);
    const MraCheck bad = check_mra({0, 1, 5});
    CHECK_FALSE(bad.ok);
    CHECK(bad.holes == std::vector<int>{2, 3});
    CHECK_FALSE(check_mra({1, 2, 4}).ok);
    CHECK(check_mra({0, 1}).ok);
}

TEST_CASE("mra_search recovers the small tabulated arrays") {
    const auto m3 = mra_search(3, 3);
    CHECK(m3 == std::vector<PortPattern>{{0, 1, 3}, {0, 2, 3}});
    const auto m5 = mra_search(5, 9);
    CHECK(contains(m5, {0, 1, 4, 7, 9}));
    CHECK(contains(m5, {0, 1, 2, 6, 9}));
    CHECK(mra_search(2, 1) == std::vector<PortPattern>{{0, 1}});
    CHECK(mra_search(5, default_aperture_cap(5)).front().aperture() == 9);
    CHECK(std::is_sorted(m5.begin(), m5.end()));
}

TEST_CASE("mra_search matches brute force for small sizes") {
    for (int m = 3; m <= 6; ++m) {
        const auto hits = mra_search(m, default_aperture_cap(m));
        const int a = hits.front().aperture();
        CHECK(hits == brute_force_rulers(m, a));
        CHECK(brute_force_rulers(m, a + 1).empty());
    }
}

TEST_CASE("mra_search respects the cap and its limits") {
    const auto capped = mra_search(5, 7);
    CHECK(capped.front().aperture() == 7);
    for (const auto& p : capped) CHECK(check_mra(p).holes.empty());
    CHECK_THROWS_AS(mra_search(4, 2), std::invalid_argument);
    CHECK_THROWS_AS(mra_search(9, 36), std::invalid_argument);
    CHECK_THROWS_AS(mra_search(12, 66, {true}), std::invalid_argument);
    CHECK_THROWS_AS(mra_search(0, 3), std::invalid_argument);
}

TEST_CASE("expected index gap reproduces the tabulated column where it is exact") {
    CHECK(expected_index_gap({0, 1, 3}) == doctest::Approx(4.0 / 3.0));
    CHECK(expected_index_gap({0, 1, 4, 7, 9}) == doctest::Approx(3.84));
    CHECK(expected_index_gap({0, 1, 2, 6, 9}) == doctest::Approx(3.68));
    CHECK(expected_index_gap({0}) == 0.0);
    for (const auto& known : known_arrays()) {
        CHECK(std::abs(expected_index_gap(known.pattern) - known.tabulated_gap) < 1e-4);
    }
}

TEST_CASE("lambda bar squared") {
    const double gap = 4.0 / 3.0;
    const double lam = 2.0 * std::numbers::pi * gap * 1.0 / 3.0;
    CHECK(lambda_bar_sq({0, 1, 3}, 1.0, 4) == doctest::Approx(lam * lam));
    CHECK_THROWS_AS(lambda_bar_sq({0}, 1.0, 1), std::invalid_argument);
}

TEST_CASE("default arrays are hole-free") {
    for (int m : {2, 3, 4, 5, 7, 9, 10, 11}) {
        const PortPattern p = default_array(m);
        CHECK(p.size() == m);
        CHECK(check_mra(p).ok);
    }
}
