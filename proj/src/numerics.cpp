// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#include "fasisac/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fasisac {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

// lgamma without touching the global signgam (glibc's lgamma is not re-entrant).
double log_gamma(double x) {
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxGammaIterations = 100000;

// ln of x^a e^-x / Gamma(a)
double gamma_prefactor_log(double a, double x) { return -x + a * std::log(x) - log_gamma(a); }

double gamma_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < kMaxGammaIterations; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) {
            return sum * std::exp(gamma_prefactor_log(a, x));
        }
    }
    throw ConvergenceError("incomplete gamma series did not converge", sum);
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double gamma_continued_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxGammaIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            return std::exp(gamma_prefactor_log(a, x)) * h;
        }
    }
    throw ConvergenceError("incomplete gamma continued fraction did not converge", h);
}

void check_gamma_args(double a, double x) {
    if (!(a > 0.0)) throw std::domain_error("incomplete gamma: shape must be positive");
    if (!(x >= 0.0)) throw std::domain_error("incomplete gamma: argument must be nonnegative");
}

void check_chi2_args(double x, long k) {
    if (k < 1) throw std::domain_error("chi-squared: degrees of freedom must be >= 1");
    if (!(x >= 0.0)) throw std::domain_error("chi-squared: argument must be nonnegative");
}

double chi2_log_pdf(double x, long k) {
    const double h = 0.5 * static_cast<double>(k);
    return (h - 1.0) * std::log(x) - 0.5 * x - h * std::numbers::ln2 - log_gamma(h);
}

// Solves tail(x) = target where tail is the lower CDF (upper == false) or the
// survival function (upper == true).
double chi2_solve(double target, long k, bool upper) {
    auto tail = [&](double x) { return upper ? chi2_sf(x, k) : chi2_cdf(x, k); };
    // "past" means x is at or beyond the root.
    auto past = [&](double x) { return upper ? tail(x) <= target : tail(x) >= target; };

    const double kd = static_cast<double>(k);
    double lo = 0.0;
    double hi = kd + 20.0 * std::sqrt(2.0 * kd);
    while (!past(hi)) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw ConvergenceError("chi2 inverse: bracket overflow", lo);
    }
    for (int i = 0; i < 400 && hi - lo > 4.0 * kEps * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (past(mid) ? hi : lo) = mid;
    }
    double x = 0.5 * (lo + hi);
    // Newton polish, kept inside the bracket.
    for (int i = 0; i < 3 && x > 0.0; ++i) {
        const double pdf = std::exp(chi2_log_pdf(x, k));
        if (!(pdf > 0.0)) break;
        const double f = tail(x) - target;
        const double step = upper ? -f / pdf : f / pdf;
        const double next = x - step;
        if (!(next > lo && next < hi) || next == x) break;
        x = next;
    }
    return x;
}

} // namespace

// --- RandomStream ---

void RandomStream::refill() {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                              static_cast<std::uint32_t>(seed_ >> 32)};
    buffer_ = philox4x32_10(ctr, key);
    ++block_;
    used_ = 0;
}

std::uint32_t RandomStream::next_u32() {
    if (used_ >= 4) refill();
    return buffer_[used_++];
}

std::uint64_t RandomStream::next_u64() {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    return (hi << 32) | lo;
}

double RandomStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RandomStream::uniform_open() { return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52; }

std::uint64_t RandomStream::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("RandomStream::below: empty range");
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = next_u64();
        if (r >= threshold) return r % n;
    }
}

double RandomStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phase = 2.0 * std::numbers::pi * u2;
    spare_normal_ = r * std::sin(phase);
    has_spare_ = true;
    return r * std::cos(phase);
}

// --- special functions ---

double regularized_gamma_p(double a, double x) {
    check_gamma_args(a, x);
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return std::min(1.0, gamma_series(a, x));
    return std::clamp(1.0 - gamma_continued_fraction(a, x), 0.0, 1.0);
}

double regularized_gamma_q(double a, double x) {
    check_gamma_args(a, x);
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return std::clamp(1.0 - gamma_series(a, x), 0.0, 1.0);
    return std::min(1.0, gamma_continued_fraction(a, x));
}

double chi2_cdf(double x, long k) {
    check_chi2_args(x, k);
    return regularized_gamma_p(0.5 * static_cast<double>(k), 0.5 * x);
}

double chi2_sf(double x, long k) {
    check_chi2_args(x, k);
    return regularized_gamma_q(0.5 * static_cast<double>(k), 0.5 * x);
}

double chi2_inv(double p, long k) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("chi2_inv: probability must lie in (0, 1)");
    if (k < 1) throw std::domain_error("chi2_inv: degrees of freedom must be >= 1");
    // Solve on whichever tail is smaller so the target keeps full relative precision.
    return p <= 0.5 ? chi2_solve(p, k, false) : chi2_solve(1.0 - p, k, true);
}

double chi2_isf(double q, long k) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("chi2_isf: tail probability must lie in (0, 1)");
    if (k < 1) throw std::domain_error("chi2_isf: degrees of freedom must be >= 1");
    return q <= 0.5 ? chi2_solve(q, k, true) : chi2_solve(1.0 - q, k, false);
}

// --- linear algebra ---

double largest_eigenvalue(const ComplexMatrix& a, const PowerIterationOptions& options) {
    if (a.rows() != a.cols()) throw std::invalid_argument("largest_eigenvalue: matrix is not square");
    const Eigen::Index n = a.rows();
    if (n == 0) throw std::invalid_argument("largest_eigenvalue: empty matrix");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw std::invalid_argument("largest_eigenvalue: matrix is not Hermitian");
    }

    // Fixed pseudo-random start; a structured start (all ones) can be
    // orthogonal to the dominant eigenvector of structured Gram matrices.
    RandomStream start(0x9d2c5680a1b3e7f1ull, 0);
    ComplexVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(start.normal(), start.normal());
    v.normalize();

    double theta = 0.0;
    for (int it = 0; it < options.max_iterations; ++it) {
        const ComplexVector w = a * v;
        theta = v.dot(w).real();
        const double wn = w.norm();
        if (wn == 0.0) return 0.0;
        const double residual = (w - theta * v).norm();
        if (residual <= options.tolerance * std::abs(theta)) return std::max(theta, 0.0);
        v = w / wn;
    }
    throw ConvergenceError("largest_eigenvalue: power iteration hit the iteration cap", theta);
}

// --- combinatorics ---

double log_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) throw std::domain_error("log_binomial: k exceeds n");
    k = std::min(k, n - k);
    if (k == 0) return 0.0;
    if (n <= 20) {
        std::uint64_t c = 1;
        for (std::uint64_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
        return std::log(static_cast<double>(c));
    }
    if (k <= 4096 || n > (std::uint64_t{1} << 40)) {
        double s = 0.0;
        for (std::uint64_t i = 0; i < k; ++i) s += std::log(static_cast<double>(n - i));
        return s - log_gamma(static_cast<double>(k) + 1.0);
    }
    const auto nd = static_cast<double>(n);
    const auto kd = static_cast<double>(k);
    return log_gamma(nd + 1.0) - log_gamma(kd + 1.0) - log_gamma(nd - kd + 1.0);
}

double log_binomial_pow2(unsigned bits, std::uint64_t k) {
    if (bits < 64) return log_binomial(std::uint64_t{1} << bits, k);
    const double inv = std::ldexp(1.0, -static_cast<int>(bits));
    double s = 0.0;
    for (std::uint64_t i = 0; i < k; ++i) s += std::log1p(-static_cast<double>(i) * inv);
    return static_cast<double>(k) * static_cast<double>(bits) * std::numbers::ln2 + s -
           log_gamma(static_cast<double>(k) + 1.0);
}

cplx complex_gaussian(RandomStream& stream, double variance) {
    if (!(variance >= 0.0)) throw std::domain_error("complex_gaussian: variance must be nonnegative");
    const double s = std::sqrt(0.5 * variance);
    const double re = stream.normal();
    const double im = stream.normal();
    return {s * re, s * im};
}

} // namespace fasisac
