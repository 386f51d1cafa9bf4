// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#ifndef FASISAC_BOUNDS_HPP
#define FASISAC_BOUNDS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "fasisac/channel.hpp"
#include "fasisac/numerics.hpp"
#include "fasisac/sensing.hpp"

namespace fasisac {

/// Which error counts the averaged channel gain multiplies in the
/// interference variance sigma_t^2.
enum class GainScope { both, cu_only };

std::string to_string(GainScope scope);
GainScope parse_gain_scope(const std::string& text);

/// Scalar description of one unsourced ISAC operating point.
struct SystemConfig {
    int bits_c = 100;          ///< A_c
    int bits_s = 100;          ///< A_s
    long users_c = 50;         ///< |A_c|
    long users_s = 50;         ///< |A_s|
    long blocklength = 5000;   ///< L
    double noise_var = 1.0;    ///< sigma^2
    SensingGeometry geometry;  ///< receive array; M = geometry.m()
    double gain = 1.0;         ///< (1/M) E||g||^2
    double gamma_max = 0.0;
    double lambda_bar_sq = 0.0;
    GainScope gain_scope = GainScope::both;

    [[nodiscard]] int antennas() const { return geometry.m(); }
    [[nodiscard]] long total_users() const { return users_c + users_s; }
    void validate() const;
};

/// Per-channel-use power constraints (p_bar) and codebook variances (p).
struct PowerAssignment {
    double p_bar_c = 0.0;
    double p_bar_s = 0.0;
    double p_c = 0.0;
    double p_s = 0.0;

    void validate() const;
    /// Equal transmit power p for both classes with p_bar = backoff * p.
    static PowerAssignment equal(double p, double backoff);
};

struct BoundBreakdown {
    double eps_cons = 0.0;
    double eps_coll = 0.0;
    double eps_md = 0.0;
    double pupe = 0.0;
    double mseaoa = 0.0;
    double e_n0_db = 0.0;
};

/// Raised when a target cannot be met at any power; names the constraint.
class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(std::string binding, const std::string& what)
        : std::runtime_error(what), binding_(std::move(binding)) {}
    [[nodiscard]] const std::string& binding() const { return binding_; }

private:
    std::string binding_;
};

/// Probability that some user's codeword energy exceeds L * p_bar.
double eps_cons(const SystemConfig& cfg, const PowerAssignment& powers);

/// Collision bound sum_i i C(n, i) / 2^(A (i-1)) per class, over all users.
double eps_coll(const SystemConfig& cfg);

/// sigma_t^2 for k_s sensing and k_c communication detection errors.
double interference_var(const SystemConfig& cfg, const PowerAssignment& powers, long k_s, long k_c);

/// Unclamped natural log of the Chernoff bound on P(K_s = k_s, K_c = k_c).
double log_p_ks_kc(const SystemConfig& cfg, const PowerAssignment& powers, long k_s, long k_c);
/// Same bound clamped to 1.
double p_ks_kc(const SystemConfig& cfg, const PowerAssignment& powers, long k_s, long k_c);

double eps_md(const SystemConfig& cfg, const PowerAssignment& powers);

/// sum over (k_s, k_c) of P_{k_s,k_c} times the Lasso MSEAOA bound with
/// sigma_z^2 = (sigma^2 + sigma_t^2) / (L p_s). Zero without sensing users.
double mseaoa_bound(const SystemConfig& cfg, const PowerAssignment& powers);

/// Both double sums in one pass over the (k_s, k_c) grid.
struct DetectionSums {
    double eps_md = 0.0;
    double mseaoa = 0.0;
};
DetectionSums detection_sums(const SystemConfig& cfg, const PowerAssignment& powers);

BoundBreakdown pupe_bound(const SystemConfig& cfg, const PowerAssignment& powers);

/// 10 log10((|A_c| p_bar_c L + |A_s| p_bar_s L) / (sigma^2 (|A_c| + |A_s|)))
double energy_per_user(const SystemConfig& cfg, const PowerAssignment& powers);

struct AchievabilityOptions {
    double cons_share = 0.01;       ///< fraction of the PUPE target given to eps_cons
    double power_lo = 1e-8;         ///< bracket, in units of sigma^2 / L
    double power_hi = 1e4;
    double resolution_db = 1e-3;
};

/// Smallest backoff p_bar / p with eps_cons <= budget (equal backoff for both classes).
double backoff_for_budget(const SystemConfig& cfg, double budget);

struct FrontierPoint {
    PowerAssignment powers;
    BoundBreakdown breakdown;
    std::string binding;  ///< "pupe" or "mseaoa"
    double backoff = 1.0;
};

/// Minimum energy-per-user meeting both targets under the equal-power convention.
FrontierPoint min_energy_achievable(const SystemConfig& cfg, double pupe_target, double mseaoa_target,
                                    const AchievabilityOptions& options = {});

/// Empirical joint detection-error frequencies of the exhaustive projection
/// detector; entry (k_s, k_c) at k_s * (users_c + 1) + k_c.
struct OracleTable {
    long users_s = 0;
    long users_c = 0;
    int trials = 0;
    std::vector<long> counts;

    [[nodiscard]] double frequency(long k_s, long k_c) const;
    [[nodiscard]] double std_error(long k_s, long k_c) const;
};

/// Tiny-scale detection experiment: Gaussian codebook, fluid-antenna channels
/// with optimal port selection, AWGN, and argmin over every candidate active
/// set of ||Y f_p(A_d)||^2. Requires 2^A_c + 2^A_s <= 64 and at most 3 users.
OracleTable detection_oracle(const SystemConfig& cfg, const PowerAssignment& powers, const ChannelParams& channel,
                             int trials, const RandomStream& stream);

namespace reference {
DetectionSums detection_sums(const SystemConfig& cfg, const PowerAssignment& powers);
OracleTable detection_oracle(const SystemConfig& cfg, const PowerAssignment& powers, const ChannelParams& channel,
                             int trials, const RandomStream& stream);
} // namespace reference

} // namespace fasisac

#endif // FASISAC_BOUNDS_HPP
