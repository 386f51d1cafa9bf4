// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fasisac/channel.hpp"
#include "fasisac/parallel.hpp"

using namespace fasisac;

TEST_CASE("ULA steering vectors") {
    const ComplexVector broadside = gen_ula_steering(6, std::numbers::pi / 2);
    for (Eigen::Index i = 0; i < broadside.size(); ++i) CHECK(std::abs(broadside(i) - cplx(1.0, 0.0)) < 1e-15);
    CHECK(gen_ula_steering(1, 0.7)(0) == cplx(1.0, 0.0));

    for (int m : {2, 5, 8}) {
        for (double theta : {0.3, 1.1, 2.9}) {
            const ComplexVector g = gen_ula_steering(m, theta);
            for (Eigen::Index i = 0; i < g.size(); ++i) CHECK(std::abs(std::abs(g(i)) - 1.0) < 1e-15);
            const ComplexVector rev = g.reverse();
            const cplx p = (g.transpose() * rev)(0);
            const cplx expect = static_cast<double>(m) * std::polar(1.0, -std::numbers::pi * (m - 1) * std::cos(theta));
            CHECK(std::abs(p - expect) < 1e-12);
        }
    }
    CHECK_THROWS_AS(gen_ula_steering(3, 0.0), std::domain_error);
    CHECK_THROWS_AS(gen_ula_steering(0, 1.0), std::invalid_argument);
}

TEST_CASE("channel realizations are deterministic and validated") {
    const ChannelParams p;
    RandomStream a(5, 1), b(5, 1);
    const auto ra = gen_fas_channel(p, 1.0, a);
    const auto rb = gen_fas_channel(p, 1.0, b);
    CHECK(ra.responses == rb.responses);
    CHECK(ra.responses.size() == p.num_ports);
    CHECK_THROWS_AS(gen_fas_channel(p, 0.0, a), std::domain_error);
    ChannelParams bad = p;
    bad.num_ports = 1;
    CHECK_THROWS_AS(gen_fas_channel(bad, 1.0, a), std::invalid_argument);
    bad = p;
    bad.rice_factor = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("optimal selection picks the strongest ports and dominates fixed patterns") {
    const ChannelParams p;
    RandomStream s(8, 2);
    const std::vector<PortPattern> fixed = {{0, 4, 9, 13, 20}, {0, 1, 2, 3, 4}, {3, 11, 19, 27, 36}};
    for (int trial = 0; trial < 200; ++trial) {
        const auto real = gen_fas_channel(p, std::numbers::pi * s.uniform_open(), s);
        const PortSelection sel = select_ports_optimal(real, 5);
        CHECK(sel.ports.size() == 5);
        double weakest_selected = 1e300;
        for (int i = 0; i < 5; ++i) weakest_selected = std::min(weakest_selected, std::norm(sel.values(i)));
        for (int n = 0; n < p.num_ports; ++n) {
            if (std::find(sel.ports.indices().begin(), sel.ports.indices().end(), n) == sel.ports.indices().end()) {
                CHECK(std::norm(real.responses(n)) <= weakest_selected);
            }
        }
        for (const auto& f : fixed) CHECK(sel.values.squaredNorm() >= select_ports_fixed(real, f).squaredNorm() - 1e-12);
    }
    RandomStream t(1, 1);
    const auto real = gen_fas_channel(p, 1.0, t);
    CHECK_THROWS_AS(select_ports_optimal(real, 0), std::out_of_range);
    CHECK_THROWS_AS(select_ports_fixed(real, {0, 37}), std::out_of_range);
}

TEST_CASE("LOS-only channel: unit modulus, so selection cannot raise the gain") {
    const ChannelParams los = ChannelParams::los_only_channel(37, 4.5);
    RandomStream s(3, 3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto real = gen_fas_channel(los, std::numbers::pi * s.uniform_open(), s);
        for (Eigen::Index i = 0; i < real.responses.size(); ++i) CHECK(std::abs(std::abs(real.responses(i)) - 1.0) < 1e-12);
        const PortSelection sel = select_ports_optimal(real, 10);
        CHECK(sel.values.squaredNorm() == doctest::Approx(select_ports_fixed(real, {0, 1, 3, 6, 13, 20, 27, 31, 35, 36}).squaredNorm()));
    }
    const MeanEstimate g = avg_channel_gain(los, 10, 500, RandomStream(3, 4));
    CHECK(std::abs(g.mean - 1.0) < 1e-6);
}

TEST_CASE("selecting every port conserves the channel strength") {
    ChannelParams p;
    p.num_ports = 12;
    p.aperture = 2.0;
    const MeanEstimate g = avg_channel_gain(p, p.num_ports, 20000, RandomStream(4, 4));
    CHECK(std::abs(g.mean - p.strength) < 4.0 * g.std_error);
}

TEST_CASE("averaged gain exceeds one and is nonincreasing in m") {
    const ChannelParams p;  // K = 0.5, L_s = 3, N_f = 37
    const RandomStream stream(2026, 10);
    double previous = 1e300;
    for (int m : {3, 5, 7, 10}) {
        const MeanEstimate g = avg_channel_gain(p, m, 2000, stream);
        CHECK(g.mean > 1.0);
        CHECK(g.mean <= previous);
        previous = g.mean;
    }
    // Regression fixture for (seed 2026, stream 10, 2000 trials, m = 10).
    CHECK(avg_channel_gain(p, 10, 2000, stream).mean == doctest::Approx(2.00334647127).epsilon(1e-9));
}

TEST_CASE("parallel gain estimate is bit-identical to the serial reference") {
    const ChannelParams p;
    const RandomStream stream(11, 12);
    for (int threads : {1, 3, 8}) {
        set_worker_threads(threads);
        const MeanEstimate par = avg_channel_gain(p, 7, 777, stream);
        const MeanEstimate ser = reference::avg_channel_gain(p, 7, 777, stream);
        CHECK(par.mean == ser.mean);
        CHECK(par.std_error == ser.std_error);
    }
    set_worker_threads(0);
    CHECK_THROWS_AS(avg_channel_gain(p, 7, 0, stream), std::invalid_argument);
    CHECK_THROWS_AS(avg_channel_gain(p, 38, 10, stream), std::out_of_range);
}
