// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#ifndef FASISAC_SENSING_HPP
#define FASISAC_SENSING_HPP

#include <string>
#include <vector>

#include "fasisac/numerics.hpp"
#include "fasisac/parallel.hpp"
#include "fasisac/ports.hpp"

namespace fasisac {

/// Receive array used for AOA sensing: active ports on an N_f-port fluid
/// antenna of aperture W. Port N_i has phase exp(-j N_i * phase_scale * cos(theta)).
struct SensingGeometry {
    PortPattern pattern{0, 1};
    double aperture = 0.5;
    int num_ports = 2;

    [[nodiscard]] int m() const { return pattern.size(); }
    [[nodiscard]] double phase_scale() const;
    void validate() const;

    /// Fluid antenna bound to `pattern`: N_f = max index + 1, W = (M - 1) / 2.
    static SensingGeometry fas(const PortPattern& pattern);
    /// Half-wavelength ULA of m elements (same aperture rule, phase scale pi).
    static SensingGeometry ula(int m);
};

/// Array response g(cos theta), length M.
ComplexVector steering(const SensingGeometry& geometry, double cos_theta);

/// conj(g) (x) g; flat position i*M + j holds exp(-j (N_j - N_i) phase_scale cos theta).
ComplexVector steering_virtual(const SensingGeometry& geometry, double cos_theta);

struct SensingCodebook {
    SensingGeometry geometry;
    ComplexMatrix matrix;        ///< M^2 x N, column n = steering_virtual(grid[n])
    std::vector<double> grid;    ///< cos(theta) samples
    double gamma_max = 0.0;      ///< largest eigenvalue of A^H A

    [[nodiscard]] int size() const { return static_cast<int>(grid.size()); }
};

/// Grid uniform in cos(theta) over [-1 + 1/N, 1 - 1/N].
SensingCodebook build_codebook(const SensingGeometry& geometry, int n_samples);

struct VirtualObservation {
    ComplexVector v;
    double sigma_z_sq = 0.0;
};

/// v = A e_true + vec(sigma_z^2 I): the covariance-domain observation with
/// the noise at its expected value.
VirtualObservation observe_expectation(const SensingCodebook& codebook, int true_index, double sigma_z_sq);

/// v = vec(g_hat g_hat^H) with g_hat = g + z, z ~ CN(0, sigma_z^2 I).
VirtualObservation observe_sampled(const SensingCodebook& codebook, double cos_theta, double sigma_z_sq,
                                   RandomStream& stream);

struct SparseEstimate {
    ComplexVector beta;                  ///< length N, zero off-support
    std::vector<int> support;            ///< ascending grid indices
    double residual_norm = 0.0;
    std::vector<double> residual_history;
};

SparseEstimate mp_solve(const SensingCodebook& codebook, const ComplexVector& v, int k, int iterations);
SparseEstimate cosamp_solve(const SensingCodebook& codebook, const ComplexVector& v, int k, int iterations);
SparseEstimate romp_solve(const SensingCodebook& codebook, const ComplexVector& v, int k, int iterations);

enum class Algorithm { mp, cosamp, romp };
std::string to_string(Algorithm algorithm);
Algorithm parse_algorithm(const std::string& name);
SparseEstimate solve(Algorithm algorithm, const SensingCodebook& codebook, const ComplexVector& v, int k,
                     int iterations);

/// 4 sigma_z^2 / M
double lasso_error_bound(int m, double sigma_z_sq);

/// max_n |a_n^H n_z| / M with n_z = vec(sigma_z^2 I).
double linf_correlation(const SensingCodebook& codebook, double sigma_z_sq);

/// 16 sigma_z^4 gamma_max / (lambda_bar^2 M^4)
double mseaoa_upper(double sigma_z_sq, double gamma_max, double lambda_bar_sq, int m);

enum class ArrayMode { ula, fas };

/// Estimates cos(theta) from the transpose-reverse product p = g^T g^R:
/// -arg(p / M) / c with c = pi (M - 1) for a ULA and 2 pi W for a fluid array.
/// The 2 pi / c branch ambiguity of the principal log is resolved against a
/// coarse estimate from the smallest-lag pairs unless `resolve_branch` is false.
double aoa_estimate_logratio(const ComplexVector& g_hat, ArrayMode mode, const SensingGeometry& geometry,
                             bool resolve_branch = true);

/// Grid value of the largest-magnitude coefficient.
double aoa_estimate_cs(const SparseEstimate& estimate, const SensingCodebook& codebook);

enum class ObservationMode { expectation, sampled };

struct SenseTrialResult {
    int true_index = 0;
    double err_l2 = 0.0;     ///< ||beta - beta_hat||_2
    double bound = 0.0;      ///< 4 sigma_z^2 / M
    double cos_error = 0.0;  ///< aoa_estimate_cs - true cos(theta)
    int support_size = 0;
};

struct SenseTrialSpec {
    Algorithm algorithm = Algorithm::mp;
    double sigma_z_sq = 0.0;
    int sparsity = 1;
    int iterations = 10;
    ObservationMode mode = ObservationMode::expectation;
};

/// One recovery trial; the true grid index is drawn from `stream`.
SenseTrialResult sense_trial(const SensingCodebook& codebook, const SenseTrialSpec& spec, RandomStream stream);

/// Trials 0..n-1 with derived streams, results in trial order.
std::vector<SenseTrialResult> run_sense_trials(const SensingCodebook& codebook, const SenseTrialSpec& spec,
                                               int trials, const RandomStream& stream);

namespace reference {
std::vector<SenseTrialResult> run_sense_trials(const SensingCodebook& codebook, const SenseTrialSpec& spec,
                                               int trials, const RandomStream& stream);
} // namespace reference

} // namespace fasisac

#endif // FASISAC_SENSING_HPP
