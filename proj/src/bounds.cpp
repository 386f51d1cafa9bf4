// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#include "fasisac/bounds.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "fasisac/parallel.hpp"

namespace fasisac {

std::string to_string(GainScope scope) { return scope == GainScope::both ? "both" : "cu_only"; }

GainScope parse_gain_scope(const std::string& text) {
    if (text == "both") return GainScope::both;
    if (text == "cu_only") return GainScope::cu_only;
    throw std::invalid_argument("unknown gain scope '" + text + "' (expected both or cu_only)");
}

void SystemConfig::validate() const {
    if (bits_c < 1 || bits_s < 1) throw std::invalid_argument("SystemConfig: payload bits must be >= 1");
    if (users_c < 0 || users_s < 0) throw std::invalid_argument("SystemConfig: user counts must be >= 0");
    if (blocklength < 1) throw std::invalid_argument("SystemConfig: blocklength must be >= 1");
    if (!(noise_var > 0.0)) throw std::invalid_argument("SystemConfig: noise variance must be > 0");
    if (!(gain >= 0.0)) throw std::invalid_argument("SystemConfig: gain must be >= 0");
    geometry.validate();
}

void PowerAssignment::validate() const {
    if (!(p_c >= 0.0 && p_s >= 0.0)) throw std::invalid_argument("PowerAssignment: powers must be >= 0");
    if (p_c > p_bar_c || p_s > p_bar_s) throw std::invalid_argument("PowerAssignment: p' exceeds p_bar");
}

PowerAssignment PowerAssignment::equal(double p, double backoff) {
    if (!(backoff >= 1.0)) throw std::invalid_argument("PowerAssignment: backoff must be >= 1");
    return {backoff * p, backoff * p, p, p};
}

namespace {

// ln F_chi2(2 L p_bar / p', 2L), the log-probability one codeword stays within budget.
double log_within_budget(long l, double p_bar, double p) {
    if (p <= 0.0) return 0.0;
    const double x = 2.0 * static_cast<double>(l) * p_bar / p;
    return std::log1p(-chi2_sf(x, 2 * l));
}

double collision_sum(long n, int bits) {
    if (n < 2) return 0.0;
    const double ln2 = std::log(2.0);
    double sum = 0.0;
    for (long i = 2; i <= n; ++i) {
        const double term = std::exp(std::log(static_cast<double>(i)) + log_binomial(static_cast<std::uint64_t>(n),
                                                                                     static_cast<std::uint64_t>(i)) -
                                     static_cast<double>(bits) * static_cast<double>(i - 1) * ln2);
        sum += term;
        // Consecutive-term ratio (n - i) / (i 2^A); once below 1 the tail only shrinks.
        const double ratio = static_cast<double>(n - i) / (static_cast<double>(i) * std::exp2(bits));
        if (ratio < 1.0 && term < 1e-18 * sum) break;
    }
    return sum;
}

double clamp_exp(double log_p) { return log_p >= 0.0 ? 1.0 : std::exp(log_p); }

// ln C(2^bits, k); -inf once k exceeds the codebook size.
double log_codebook_choose(int bits, long k) {
    if (bits < 63 && static_cast<std::uint64_t>(k) > (std::uint64_t{1} << bits)) {
        return -std::numeric_limits<double>::infinity();
    }
    return log_binomial_pow2(static_cast<unsigned>(bits), static_cast<std::uint64_t>(k));
}

double log_class_term(long users, int bits, long k) {
    return log_binomial(static_cast<std::uint64_t>(users), static_cast<std::uint64_t>(k)) + log_codebook_choose(bits, k);
}

struct LogTables {
    std::vector<double> s;  // ln C(|A_s|, k) + ln C(2^A_s, k)
    std::vector<double> c;
};

LogTables log_tables(const SystemConfig& cfg) {
    LogTables t;
    t.s.resize(static_cast<std::size_t>(cfg.users_s + 1));
    t.c.resize(static_cast<std::size_t>(cfg.users_c + 1));
    for (long k = 0; k <= cfg.users_s; ++k) t.s[static_cast<std::size_t>(k)] = log_class_term(cfg.users_s, cfg.bits_s, k);
    for (long k = 0; k <= cfg.users_c; ++k) t.c[static_cast<std::size_t>(k)] = log_class_term(cfg.users_c, cfg.bits_c, k);
    return t;
}

// Row k_s of both double sums, accumulated over k_c in ascending order.
DetectionSums detection_row(const SystemConfig& cfg, const PowerAssignment& powers, const LogTables& t, long k_s) {
    const double lm = static_cast<double>(cfg.blocklength) * cfg.antennas();
    const double total = static_cast<double>(cfg.total_users());
    const bool sensing = cfg.users_s > 0;
    DetectionSums row;
    for (long k_c = 0; k_c <= cfg.users_c; ++k_c) {
        const double st = interference_var(cfg, powers, k_s, k_c);
        const double log_p = t.s[static_cast<std::size_t>(k_s)] + t.c[static_cast<std::size_t>(k_c)] -
                             lm * std::log1p(0.25 * st / cfg.noise_var);
        const double p = clamp_exp(log_p);
        row.eps_md += static_cast<double>(k_c + k_s) / total * p;
        if (sensing) {
            const double sz = (cfg.noise_var + st) / (static_cast<double>(cfg.blocklength) * powers.p_s);
            row.mseaoa += p * mseaoa_upper(sz, cfg.gamma_max, cfg.lambda_bar_sq, cfg.antennas());
        }
    }
    return row;
}

DetectionSums combine(const std::vector<DetectionSums>& rows) {
    DetectionSums out;
    for (const auto& r : rows) {
        out.eps_md += r.eps_md;
        out.mseaoa += r.mseaoa;
    }
    return out;
}

template <class Loop>
DetectionSums detection_sums_with(const SystemConfig& cfg, const PowerAssignment& powers, Loop&& loop) {
    if (cfg.total_users() == 0) return {};
    if (cfg.users_s > 0 && !(powers.p_s > 0.0)) {
        throw std::invalid_argument("detection_sums: sensing users need p_s > 0");
    }
    const LogTables t = log_tables(cfg);
    std::vector<DetectionSums> rows(static_cast<std::size_t>(cfg.users_s + 1));
    loop(cfg.users_s + 1, [&](std::int64_t k_s) {
        rows[static_cast<std::size_t>(k_s)] = detection_row(cfg, powers, t, static_cast<long>(k_s));
    });
    return combine(rows);
}

} // namespace

double eps_cons(const SystemConfig& cfg, const PowerAssignment& powers) {
    powers.validate();
    const double log_ok = static_cast<double>(cfg.users_s) * log_within_budget(cfg.blocklength, powers.p_bar_s, powers.p_s) +
                          static_cast<double>(cfg.users_c) * log_within_budget(cfg.blocklength, powers.p_bar_c, powers.p_c);
    return -std::expm1(log_ok);
}

double eps_coll(const SystemConfig& cfg) {
    const long total = cfg.total_users();
    if (total == 0) return 0.0;
    return (collision_sum(cfg.users_s, cfg.bits_s) + collision_sum(cfg.users_c, cfg.bits_c)) / static_cast<double>(total);
}

double interference_var(const SystemConfig& cfg, const PowerAssignment& powers, long k_s, long k_c) {
    const double cu = static_cast<double>(k_c) * powers.p_c;
    const double su = static_cast<double>(k_s) * powers.p_s;
    return cfg.gain_scope == GainScope::both ? cfg.gain * (cu + su) : cfg.gain * cu + su;
}

double log_p_ks_kc(const SystemConfig& cfg, const PowerAssignment& powers, long k_s, long k_c) {
    if (k_s < 0 || k_s > cfg.users_s || k_c < 0 || k_c > cfg.users_c) {
        throw std::out_of_range("p_ks_kc: error counts outside [0, users]");
    }
    const double l_s = log_class_term(cfg.users_s, cfg.bits_s, k_s);
    const double l_c = log_class_term(cfg.users_c, cfg.bits_c, k_c);
    const double lm = static_cast<double>(cfg.blocklength) * cfg.antennas();
    return l_s + l_c - lm * std::log1p(0.25 * interference_var(cfg, powers, k_s, k_c) / cfg.noise_var);
}

double p_ks_kc(const SystemConfig& cfg, const PowerAssignment& powers, long k_s, long k_c) {
    return clamp_exp(log_p_ks_kc(cfg, powers, k_s, k_c));
}

DetectionSums detection_sums(const SystemConfig& cfg, const PowerAssignment& powers) {
    return detection_sums_with(cfg, powers, [](std::int64_t n, auto&& body) { parallel_for(n, body); });
}

namespace reference {
DetectionSums detection_sums(const SystemConfig& cfg, const PowerAssignment& powers) {
    return detection_sums_with(cfg, powers, [](std::int64_t n, auto&& body) { serial_for(n, body); });
}
} // namespace reference

double eps_md(const SystemConfig& cfg, const PowerAssignment& powers) { return detection_sums(cfg, powers).eps_md; }

double mseaoa_bound(const SystemConfig& cfg, const PowerAssignment& powers) {
    return detection_sums(cfg, powers).mseaoa;
}

double energy_per_user(const SystemConfig& cfg, const PowerAssignment& powers) {
    const long total = cfg.total_users();
    if (total == 0) throw std::invalid_argument("energy_per_user: no users");
    const double l = static_cast<double>(cfg.blocklength);
    const double energy = static_cast<double>(cfg.users_c) * powers.p_bar_c * l + static_cast<double>(cfg.users_s) * powers.p_bar_s * l;
    return 10.0 * std::log10(energy / (cfg.noise_var * static_cast<double>(total)));
}

BoundBreakdown pupe_bound(const SystemConfig& cfg, const PowerAssignment& powers) {
    BoundBreakdown b;
    b.eps_cons = eps_cons(cfg, powers);
    b.eps_coll = eps_coll(cfg);
    const DetectionSums sums = detection_sums(cfg, powers);
    b.eps_md = sums.eps_md;
    b.mseaoa = sums.mseaoa;
    b.pupe = b.eps_cons + b.eps_coll + b.eps_md;
    b.e_n0_db = cfg.total_users() > 0 ? energy_per_user(cfg, powers) : -std::numeric_limits<double>::infinity();
    return b;
}

double backoff_for_budget(const SystemConfig& cfg, double budget) {
    if (!(budget > 0.0 && budget < 1.0)) throw std::invalid_argument("backoff_for_budget: budget must be in (0, 1)");
    const long total = cfg.total_users();
    if (total == 0) return 1.0;
    const double tail = -std::expm1(std::log1p(-budget) / static_cast<double>(total));
    const long dof = 2 * cfg.blocklength;
    return std::max(1.0, chi2_isf(tail, dof) / static_cast<double>(dof));
}

namespace {

// Smallest p in [lo, hi] (to `resolution_db`) with feasible(p), assuming
// feasibility is monotone in p. NaN when hi itself is infeasible.
double bisect_power(double lo, double hi, double resolution_db, const std::function<bool(double)>& feasible) {
    if (feasible(lo)) return lo;
    if (!feasible(hi)) return std::numeric_limits<double>::quiet_NaN();
    while (10.0 * std::log10(hi / lo) > resolution_db) {
        const double mid = std::sqrt(lo * hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

} // namespace

FrontierPoint min_energy_achievable(const SystemConfig& cfg, double pupe_target, double mseaoa_target,
                                    const AchievabilityOptions& options) {
    cfg.validate();
    if (!(pupe_target > 0.0 && pupe_target < 1.0)) throw std::invalid_argument("pupe target must be in (0, 1)");
    if (!(mseaoa_target > 0.0)) throw std::invalid_argument("mseaoa target must be > 0");
    if (cfg.total_users() == 0) throw std::invalid_argument("min_energy_achievable: no users");

    const double coll = eps_coll(cfg);
    if (coll >= pupe_target) {
        throw InfeasibleError("collision", "collision bound " + std::to_string(coll) + " already exceeds the PUPE target");
    }
    const double kappa = backoff_for_budget(cfg, options.cons_share * pupe_target);
    const double cons = eps_cons(cfg, PowerAssignment::equal(1.0, kappa));
    const double md_budget = pupe_target - coll - cons;
    if (!(md_budget > 0.0)) throw InfeasibleError("collision", "no PUPE budget left for missed detection");

    const double unit = cfg.noise_var / static_cast<double>(cfg.blocklength);
    const double lo = options.power_lo * unit;
    const double hi = options.power_hi * unit;
    const auto sums_at = [&](double p) { return detection_sums(cfg, PowerAssignment::equal(p, kappa)); };

    const double p_md = bisect_power(lo, hi, options.resolution_db, [&](double p) { return sums_at(p).eps_md <= md_budget; });
    if (std::isnan(p_md)) throw InfeasibleError("pupe", "missed-detection bound above budget over the whole power bracket");
    double p_mse = lo;
    if (cfg.users_s > 0) {
        p_mse = bisect_power(lo, hi, options.resolution_db, [&](double p) { return sums_at(p).mseaoa <= mseaoa_target; });
        if (std::isnan(p_mse)) throw InfeasibleError("mseaoa", "MSEAOA bound above target over the whole power bracket");
    }

    FrontierPoint out;
    out.backoff = kappa;
    out.binding = p_mse > p_md ? "mseaoa" : "pupe";
    out.powers = PowerAssignment::equal(std::max(p_md, p_mse), kappa);
    out.breakdown = pupe_bound(cfg, out.powers);
    return out;
}

} // namespace fasisac
