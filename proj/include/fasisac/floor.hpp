// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#ifndef FASISAC_FLOOR_HPP
#define FASISAC_FLOOR_HPP

#include <string>
#include <vector>

#include "fasisac/bounds.hpp"
#include "fasisac/channel.hpp"

namespace fasisac {

// Optimistic floor: collision-only PUPE, single-user CRLB, and the ergodic
// sum-rate constraint B_T / L <= E log2 det(I + G Psi G^H / sigma^2).

double pupe_floor(const SystemConfig& cfg);

/// 0.5 sigma^2 / (pi^2 L p_bar_s sum_{i=1}^{M-1} i^2)
double crlb_mseaoa(const SystemConfig& cfg, double p_bar_s);

/// Per-trial Gram matrices sum_j g_j g_j^H, kept per user class so the
/// same channel draws can be reused at any power (common random numbers).
struct ChannelGrams {
    std::vector<ComplexMatrix> cu;
    std::vector<ComplexMatrix> su;
};

/// Trial t draws, for every CU then every SU, a uniform LOS angle, a channel
/// realization, and its optimal M-port selection.
ChannelGrams draw_channel_grams(const SystemConfig& cfg, const ChannelParams& channel, int trials,
                                const RandomStream& stream);

/// Mean and standard error of log2 det(I + (p_bar_c G_c + p_bar_s G_s) / sigma^2).
MeanEstimate capacity_from_grams(const ChannelGrams& grams, const SystemConfig& cfg, const PowerAssignment& powers);

MeanEstimate capacity_mc(const SystemConfig& cfg, const PowerAssignment& powers, const ChannelParams& channel,
                         int trials, const RandomStream& stream);

struct FloorPoint {
    double e_n0_db = 0.0;
    double power = 0.0;           ///< shared p_bar
    std::string binding;          ///< "capacity" or "crlb"
    MeanEstimate capacity;        ///< at the returned power
    double pupe_floor = 0.0;
    double crlb = 0.0;
};

struct FloorOptions {
    double power_lo = 1e-8;  ///< bracket, in units of sigma^2 / L
    double power_hi = 1e4;
    double resolution_db = 1e-3;
};

/// Smallest shared power meeting mean - 2 stderr >= B_T / L and the CRLB target.
FloorPoint min_energy_floor(const SystemConfig& cfg, double pupe_target, double mseaoa_target,
                            const ChannelParams& channel, int trials, const RandomStream& stream,
                            const FloorOptions& options = {});

namespace reference {
ChannelGrams draw_channel_grams(const SystemConfig& cfg, const ChannelParams& channel, int trials,
                                const RandomStream& stream);
MeanEstimate capacity_from_grams(const ChannelGrams& grams, const SystemConfig& cfg, const PowerAssignment& powers);
} // namespace reference

} // namespace fasisac

#endif // FASISAC_FLOOR_HPP
