// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#include "fasisac/channel.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace fasisac {

void ChannelParams::validate() const {
    if (!(rice_factor >= 0.0)) throw std::invalid_argument("ChannelParams: rice factor must be >= 0");
    if (num_scatterers < 0) throw std::invalid_argument("ChannelParams: scatterer count must be >= 0");
    if (!(strength > 0.0)) throw std::invalid_argument("ChannelParams: channel strength must be > 0");
    if (num_ports < 2) throw std::invalid_argument("ChannelParams: need at least two ports");
    if (!(aperture > 0.0)) throw std::invalid_argument("ChannelParams: aperture must be > 0");
}

ChannelRealization gen_fas_channel(const ChannelParams& params, double los_aoa, RandomStream& stream) {
    params.validate();
    if (!(los_aoa > 0.0 && los_aoa < std::numbers::pi)) {
        throw std::domain_error("gen_fas_channel: LOS angle must lie in (0, pi)");
    }
    const int n_ports = params.num_ports;
    const double step = 2.0 * std::numbers::pi * params.aperture / (n_ports - 1);

    ChannelRealization out;
    out.los_aoa = los_aoa;
    out.los_phase = 2.0 * std::numbers::pi * stream.uniform();

    double los_amp = std::sqrt(params.strength);
    if (!params.los_only()) {
        los_amp = std::sqrt(params.rice_factor * params.strength / (params.rice_factor + 1.0));
    }
    const cplx sigma0 = std::polar(los_amp, out.los_phase);
    const double c0 = std::cos(los_aoa);

    out.responses.resize(n_ports);
    for (int n = 0; n < n_ports; ++n) out.responses(n) = sigma0 * std::polar(1.0, -step * n * c0);

    if (!params.los_only() && params.num_scatterers > 0) {
        const double path_var = params.strength / ((params.rice_factor + 1.0) * params.num_scatterers);
        for (int l = 0; l < params.num_scatterers; ++l) {
            const double theta = std::numbers::pi * stream.uniform_open();
            const cplx sigma = complex_gaussian(stream, path_var);
            const double cl = std::cos(theta);
            for (int n = 0; n < n_ports; ++n) out.responses(n) += sigma * std::polar(1.0, -step * n * cl);
        }
    }
    return out;
}

PortSelection select_ports_optimal(const ChannelRealization& realization, int m) {
    const auto n_ports = static_cast<int>(realization.responses.size());
    if (m < 1 || m > n_ports) throw std::out_of_range("select_ports_optimal: m out of range");

    std::vector<int> order(static_cast<std::size_t>(n_ports));
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> mag(static_cast<std::size_t>(n_ports));
    for (int n = 0; n < n_ports; ++n) mag[static_cast<std::size_t>(n)] = std::norm(realization.responses(n));
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return mag[static_cast<std::size_t>(a)] > mag[static_cast<std::size_t>(b)];
    });
    order.resize(static_cast<std::size_t>(m));
    std::sort(order.begin(), order.end());

    PortPattern ports(order);
    return {ports, select_ports_fixed(realization, ports)};
}

ComplexVector select_ports_fixed(const ChannelRealization& realization, const PortPattern& pattern) {
    const auto n_ports = static_cast<int>(realization.responses.size());
    if (pattern.back() >= n_ports) throw std::out_of_range("select_ports_fixed: port index out of range");
    ComplexVector out(pattern.size());
    for (int i = 0; i < pattern.size(); ++i) out(i) = realization.responses(pattern[i]);
    return out;
}

ComplexVector gen_ula_steering(int m, double theta) {
    if (m < 1) throw std::invalid_argument("gen_ula_steering: m must be >= 1");
    if (!(theta > 0.0 && theta < std::numbers::pi)) {
        throw std::domain_error("gen_ula_steering: angle must lie in (0, pi)");
    }
    const double c = std::cos(theta);
    ComplexVector out(m);
    for (int i = 0; i < m; ++i) out(i) = std::polar(1.0, -std::numbers::pi * i * c);
    return out;
}

double channel_gain_trial(const ChannelParams& params, int m, RandomStream stream) {
    const double theta0 = std::numbers::pi * stream.uniform_open();
    const ChannelRealization real = gen_fas_channel(params, theta0, stream);
    return select_ports_optimal(real, m).values.squaredNorm() / m;
}

namespace {

void check_gain_args(const ChannelParams& params, int m, int trials) {
    params.validate();
    if (trials < 1) throw std::invalid_argument("avg_channel_gain: trials must be >= 1");
    if (m < 1 || m > params.num_ports) throw std::out_of_range("avg_channel_gain: m out of range");
}

} // namespace

MeanEstimate avg_channel_gain(const ChannelParams& params, int m, int trials, const RandomStream& stream) {
    check_gain_args(params, m, trials);
    std::vector<double> values(static_cast<std::size_t>(trials));
    parallel_for(trials, [&](std::int64_t t) {
        values[static_cast<std::size_t>(t)] =
            channel_gain_trial(params, m, stream.for_trial(static_cast<std::uint32_t>(t)));
    });
    return summarize(values);
}

namespace reference {

MeanEstimate avg_channel_gain(const ChannelParams& params, int m, int trials, const RandomStream& stream) {
    check_gain_args(params, m, trials);
    std::vector<double> values(static_cast<std::size_t>(trials));
    serial_for(trials, [&](std::int64_t t) {
        values[static_cast<std::size_t>(t)] =
            channel_gain_trial(params, m, stream.for_trial(static_cast<std::uint32_t>(t)));
    });
    return summarize(values);
}

} // namespace reference

} // namespace fasisac
