// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#ifndef FASISAC_NUMERICS_HPP
#define FASISAC_NUMERICS_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fasisac {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Counter-based Philox4x32-10 stream.
///
/// A stream is identified by (seed, stream_id); the sample sequence is a pure
/// function of those two values and the draw position, so it is identical on
/// every platform and independent of thread scheduling. Monte Carlo loops never
/// share a stream: each trial gets `for_trial(t)`, whose id is
/// `stream_id * 2^32 + t`.
class RandomStream {
public:
    RandomStream() = default;
    RandomStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {}

    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const { return stream_id_; }

    /// Child stream for trial `trial` of this experiment.
    [[nodiscard]] RandomStream for_trial(std::uint32_t trial) const {
        return {seed_, (stream_id_ << 32) + trial};
    }

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on the open interval (0, 1).
    double uniform_open();
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    /// Standard normal (Box-Muller, both outputs used).
    double normal();

private:
    void refill();

    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// Raised by iterative routines that hit their iteration cap.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_iterate)
        : std::runtime_error(what), last_iterate_(last_iterate) {}
    [[nodiscard]] double last_iterate() const { return last_iterate_; }

private:
    double last_iterate_;
};

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

/// CDF of the chi-squared distribution with k degrees of freedom.
double chi2_cdf(double x, long k);
/// Upper tail 1 - chi2_cdf, evaluated without cancellation.
double chi2_sf(double x, long k);
/// Inverse CDF; the result satisfies chi2_cdf(result, k) = p to 1e-8 relative.
double chi2_inv(double p, long k);
/// Inverse of the upper tail: chi2_sf(result, k) = q.
double chi2_isf(double q, long k);

struct PowerIterationOptions {
    int max_iterations = 200000;
    double tolerance = 1e-11;
};

/// Largest eigenvalue of a Hermitian positive-semidefinite matrix by power
/// iteration from a fixed start vector. Stops once the eigen-residual
/// ||A v - theta v|| falls below tolerance * theta.
double largest_eigenvalue(const ComplexMatrix& a, const PowerIterationOptions& options = {});

/// ln C(n, k). Exact integer arithmetic for n <= 20.
double log_binomial(std::uint64_t n, std::uint64_t k);
/// ln C(2^bits, k), computed without forming 2^bits.
double log_binomial_pow2(unsigned bits, std::uint64_t k);

/// One CN(0, variance) sample.
cplx complex_gaussian(RandomStream& stream, double variance);

} // namespace fasisac

#endif // FASISAC_NUMERICS_HPP
