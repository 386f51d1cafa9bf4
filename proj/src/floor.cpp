// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#include "fasisac/floor.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fasisac/parallel.hpp"

namespace fasisac {

namespace {

double class_floor(long users, int bits) {
    if (users < 2) return 0.0;
    const double ln2 = std::log(2.0);
    const double log_pair = log_binomial(static_cast<std::uint64_t>(users), 2) - bits * ln2;
    // ln((2^B - 1) / 2^B) = log1p(-2^-B)
    const double log_rest = static_cast<double>(users - 2) * std::log1p(-std::ldexp(1.0, -bits));
    return std::exp(log_pair + log_rest);
}

ComplexMatrix user_gram(const SystemConfig& cfg, const ChannelParams& channel, long users, RandomStream& stream) {
    const int m = cfg.antennas();
    ComplexMatrix gram = ComplexMatrix::Zero(m, m);
    for (long j = 0; j < users; ++j) {
        const double theta = std::numbers::pi * stream.uniform_open();
        const ChannelRealization real = gen_fas_channel(channel, theta, stream);
        const ComplexVector g = select_ports_optimal(real, m).values;
        gram.noalias() += g * g.adjoint();
    }
    return gram;
}

double log2_det_trial(const ComplexMatrix& cu, const ComplexMatrix& su, const SystemConfig& cfg,
                      const PowerAssignment& powers) {
    const auto m = cu.rows();
    ComplexMatrix a = ComplexMatrix::Identity(m, m);
    a += (powers.p_bar_c / cfg.noise_var) * cu + (powers.p_bar_s / cfg.noise_var) * su;
    const Eigen::LLT<ComplexMatrix> llt(a);
    if (llt.info() != Eigen::Success) throw std::runtime_error("capacity: I + G Psi G^H / sigma^2 is not positive definite");
    double s = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) s += std::log(llt.matrixLLT()(i, i).real());
    return 2.0 * s / std::numbers::ln2;
}

template <class Loop>
ChannelGrams grams_with(const SystemConfig& cfg, const ChannelParams& channel, int trials, const RandomStream& stream,
                        Loop&& loop) {
    cfg.validate();
    channel.validate();
    if (trials < 1) throw std::invalid_argument("capacity: trials must be >= 1");
    if (channel.num_ports < cfg.antennas()) throw std::invalid_argument("capacity: fewer ports than antennas");
    ChannelGrams out;
    out.cu.resize(static_cast<std::size_t>(trials));
    out.su.resize(static_cast<std::size_t>(trials));
    loop(trials, [&](std::int64_t t) {
        RandomStream s = stream.for_trial(static_cast<std::uint32_t>(t));
        out.cu[static_cast<std::size_t>(t)] = user_gram(cfg, channel, cfg.users_c, s);
        out.su[static_cast<std::size_t>(t)] = user_gram(cfg, channel, cfg.users_s, s);
    });
    return out;
}

template <class Loop>
MeanEstimate capacity_with(const ChannelGrams& grams, const SystemConfig& cfg, const PowerAssignment& powers,
                           Loop&& loop) {
    std::vector<double> values(grams.cu.size());
    loop(static_cast<std::int64_t>(values.size()), [&](std::int64_t t) {
        const auto i = static_cast<std::size_t>(t);
        values[i] = log2_det_trial(grams.cu[i], grams.su[i], cfg, powers);
    });
    return summarize(values);
}

const auto kParallel = [](std::int64_t n, auto&& body) { parallel_for(n, body); };
const auto kSerial = [](std::int64_t n, auto&& body) { serial_for(n, body); };

} // namespace

double pupe_floor(const SystemConfig& cfg) {
    return class_floor(cfg.users_c, cfg.bits_c) + class_floor(cfg.users_s, cfg.bits_s);
}

double crlb_mseaoa(const SystemConfig& cfg, double p_bar_s) {
    const double m = cfg.antennas();
    if (m < 2) throw std::invalid_argument("crlb_mseaoa: need M >= 2");
    if (!(p_bar_s > 0.0)) throw std::invalid_argument("crlb_mseaoa: p_bar_s must be > 0");
    const double sum_sq = (m - 1.0) * m * (2.0 * m - 1.0) / 6.0;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return 0.5 * cfg.noise_var / (pi2 * static_cast<double>(cfg.blocklength) * p_bar_s * sum_sq);
}

ChannelGrams draw_channel_grams(const SystemConfig& cfg, const ChannelParams& channel, int trials,
                                const RandomStream& stream) {
    return grams_with(cfg, channel, trials, stream, kParallel);
}

MeanEstimate capacity_from_grams(const ChannelGrams& grams, const SystemConfig& cfg, const PowerAssignment& powers) {
    return capacity_with(grams, cfg, powers, kParallel);
}

MeanEstimate capacity_mc(const SystemConfig& cfg, const PowerAssignment& powers, const ChannelParams& channel,
                         int trials, const RandomStream& stream) {
    return capacity_from_grams(draw_channel_grams(cfg, channel, trials, stream), cfg, powers);
}

namespace reference {
ChannelGrams draw_channel_grams(const SystemConfig& cfg, const ChannelParams& channel, int trials,
                                const RandomStream& stream) {
    return grams_with(cfg, channel, trials, stream, kSerial);
}

MeanEstimate capacity_from_grams(const ChannelGrams& grams, const SystemConfig& cfg, const PowerAssignment& powers) {
    return capacity_with(grams, cfg, powers, kSerial);
}
} // namespace reference

FloorPoint min_energy_floor(const SystemConfig& cfg, double pupe_target, double mseaoa_target,
                            const ChannelParams& channel, int trials, const RandomStream& stream,
                            const FloorOptions& options) {
    cfg.validate();
    if (cfg.total_users() == 0) throw std::invalid_argument("min_energy_floor: no users");
    if (!(pupe_target > 0.0 && pupe_target < 1.0)) throw std::invalid_argument("pupe target must be in (0, 1)");
    if (!(mseaoa_target > 0.0)) throw std::invalid_argument("mseaoa target must be > 0");

    FloorPoint out;
    out.pupe_floor = pupe_floor(cfg);
    if (out.pupe_floor > pupe_target) throw InfeasibleError("collision", "collision floor exceeds the PUPE target");

    const double rate = (static_cast<double>(cfg.bits_c) * cfg.users_c + static_cast<double>(cfg.bits_s) * cfg.users_s) /
                        static_cast<double>(cfg.blocklength);
    const ChannelGrams grams = draw_channel_grams(cfg, channel, trials, stream);
    const auto rate_ok = [&](double p) {
        const MeanEstimate c = capacity_from_grams(grams, cfg, PowerAssignment::equal(p, 1.0));
        return c.mean - 2.0 * c.std_error >= rate;
    };

    const double unit = cfg.noise_var / static_cast<double>(cfg.blocklength);
    double lo = options.power_lo * unit;
    double hi = options.power_hi * unit;
    double p_rate = lo;
    if (!rate_ok(lo)) {
        if (!rate_ok(hi)) throw InfeasibleError("capacity", "sum rate stays below B_T / L over the whole power bracket");
        while (10.0 * std::log10(hi / lo) > options.resolution_db) {
            const double mid = std::sqrt(lo * hi);
            (rate_ok(mid) ? hi : lo) = mid;
        }
        p_rate = hi;
    }

    double p_crlb = 0.0;
    if (cfg.users_s > 0 && std::isfinite(mseaoa_target)) p_crlb = crlb_mseaoa(cfg, 1.0) / mseaoa_target;

    out.power = std::max(p_rate, p_crlb);
    out.binding = p_crlb > p_rate ? "crlb" : "capacity";
    const PowerAssignment powers = PowerAssignment::equal(out.power, 1.0);
    out.capacity = capacity_from_grams(grams, cfg, powers);
    out.crlb = cfg.users_s > 0 ? crlb_mseaoa(cfg, out.power) : 0.0;
    out.e_n0_db = energy_per_user(cfg, powers);
    return out;
}

} // namespace fasisac
