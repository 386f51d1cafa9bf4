// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#ifndef FASISAC_CHANNEL_HPP
#define FASISAC_CHANNEL_HPP

#include <cmath>
#include <limits>

#include "fasisac/numerics.hpp"
#include "fasisac/parallel.hpp"
#include "fasisac/ports.hpp"

namespace fasisac {

/// Ray-model fluid-antenna channel: one LOS path plus `num_scatterers` NLOS
/// paths observed on `num_ports` ports spread uniformly over `aperture`
/// wavelengths.
struct ChannelParams {
    double rice_factor = 0.5;  ///< K; +infinity gives the LOS-only channel
    int num_scatterers = 3;    ///< L_s
    double strength = 1.0;     ///< Omega
    int num_ports = 37;        ///< N_f
    double aperture = 4.5;     ///< W in wavelengths

    void validate() const;
    [[nodiscard]] bool los_only() const { return std::isinf(rice_factor); }

    static ChannelParams los_only_channel(int num_ports, double aperture) {
        return {std::numeric_limits<double>::infinity(), 0, 1.0, num_ports, aperture};
    }
};

struct ChannelRealization {
    ComplexVector responses;  ///< one entry per port
    double los_aoa = 0.0;     ///< theta_0 in (0, pi)
    double los_phase = 0.0;   ///< alpha in [0, 2 pi)
};

struct PortSelection {
    PortPattern ports;
    ComplexVector values;
};

/// Draws one realization. NLOS gains are i.i.d. CN(0, Omega / ((K + 1) L_s)),
/// so the NLOS power budget Omega / (K + 1) holds in expectation.
ChannelRealization gen_fas_channel(const ChannelParams& params, double los_aoa, RandomStream& stream);

/// The m strongest ports (ties go to the lower index), returned in ascending order.
PortSelection select_ports_optimal(const ChannelRealization& realization, int m);

ComplexVector select_ports_fixed(const ChannelRealization& realization, const PortPattern& pattern);

/// Half-wavelength ULA response, entry i = exp(-j pi i cos(theta)).
ComplexVector gen_ula_steering(int m, double theta);

/// Monte Carlo estimate of (1/m) E||g||^2 under optimal port selection with a
/// uniformly drawn LOS angle per trial.
MeanEstimate avg_channel_gain(const ChannelParams& params, int m, int trials, const RandomStream& stream);

/// One trial of the gain estimator; shared by the parallel and reference loops.
double channel_gain_trial(const ChannelParams& params, int m, RandomStream stream);

namespace reference {
MeanEstimate avg_channel_gain(const ChannelParams& params, int m, int trials, const RandomStream& stream);
} // namespace reference

} // namespace fasisac

#endif // FASISAC_CHANNEL_HPP
