// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#include "fasisac/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace fasisac {

// --- geometry ---

double SensingGeometry::phase_scale() const {
    return 2.0 * std::numbers::pi * aperture / (num_ports - 1);
}

void SensingGeometry::validate() const {
    if (num_ports < 2) throw std::invalid_argument("SensingGeometry: need at least two ports");
    if (!(aperture > 0.0)) throw std::invalid_argument("SensingGeometry: aperture must be > 0");
    if (pattern.back() >= num_ports) throw std::invalid_argument("SensingGeometry: pattern exceeds port count");
}

SensingGeometry SensingGeometry::fas(const PortPattern& pattern) {
    if (pattern.size() < 2) throw std::invalid_argument("SensingGeometry::fas: need at least two ports");
    return {pattern, 0.5 * (pattern.size() - 1), pattern.back() + 1};
}

SensingGeometry SensingGeometry::ula(int m) {
    if (m < 2) throw std::invalid_argument("SensingGeometry::ula: need at least two elements");
    return {PortPattern::contiguous(m), 0.5 * (m - 1), m};
}

ComplexVector steering(const SensingGeometry& geometry, double cos_theta) {
    const double s = geometry.phase_scale();
    ComplexVector g(geometry.m());
    for (int i = 0; i < geometry.m(); ++i) g(i) = std::polar(1.0, -s * geometry.pattern[i] * cos_theta);
    return g;
}

ComplexVector steering_virtual(const SensingGeometry& geometry, double cos_theta) {
    const int m = geometry.m();
    const double s = geometry.phase_scale();
    ComplexVector out(m * m);
    // Phase depends only on the index difference, so diagonal entries are exactly 1.
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const int lag = geometry.pattern[j] - geometry.pattern[i];
            out(i * m + j) = lag == 0 ? cplx(1.0, 0.0) : std::polar(1.0, -s * lag * cos_theta);
        }
    }
    return out;
}

SensingCodebook build_codebook(const SensingGeometry& geometry, int n_samples) {
    geometry.validate();
    if (n_samples < 2) throw std::invalid_argument("build_codebook: need at least two AOA samples");
    SensingCodebook cb;
    cb.geometry = geometry;
    const double delta = 1.0 / n_samples;
    const double lo = -1.0 + delta;
    const double step = (2.0 - 2.0 * delta) / (n_samples - 1);
    cb.grid.resize(static_cast<std::size_t>(n_samples));
    const int m = geometry.m();
    cb.matrix.resize(m * m, n_samples);
    for (int n = 0; n < n_samples; ++n) {
        cb.grid[static_cast<std::size_t>(n)] = lo + step * n;
        cb.matrix.col(n) = steering_virtual(geometry, cb.grid[static_cast<std::size_t>(n)]);
    }
    const ComplexMatrix gram = cb.matrix.adjoint() * cb.matrix;
    cb.gamma_max = largest_eigenvalue(gram);
    return cb;
}

// --- observations ---

namespace {

ComplexVector vec_identity(int m, double scale) {
    ComplexVector out = ComplexVector::Zero(m * m);
    for (int i = 0; i < m; ++i) out(i * m + i) = scale;
    return out;
}

} // namespace

VirtualObservation observe_expectation(const SensingCodebook& codebook, int true_index, double sigma_z_sq) {
    if (true_index < 0 || true_index >= codebook.size()) {
        throw std::out_of_range("observe_expectation: grid index out of range");
    }
    if (!(sigma_z_sq >= 0.0)) throw std::domain_error("observe_expectation: noise variance must be >= 0");
    ComplexVector v = codebook.matrix.col(true_index);
    const int m = codebook.geometry.m();
    for (int i = 0; i < m; ++i) v(i * m + i) += sigma_z_sq;
    return {std::move(v), sigma_z_sq};
}

VirtualObservation observe_sampled(const SensingCodebook& codebook, double cos_theta, double sigma_z_sq,
                                   RandomStream& stream) {
    if (!(sigma_z_sq >= 0.0)) throw std::domain_error("observe_sampled: noise variance must be >= 0");
    ComplexVector g = steering(codebook.geometry, cos_theta);
    for (Eigen::Index i = 0; i < g.size(); ++i) g(i) += complex_gaussian(stream, sigma_z_sq);
    const auto m = static_cast<int>(g.size());
    ComplexVector v(m * m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) v(i * m + j) = std::conj(g(i)) * g(j);
    }
    return {std::move(v), sigma_z_sq};
}

// --- greedy solvers ---

namespace {

// Indices of the `count` largest entries of |u|, ties to the lower index.
std::vector<int> top_indices(const ComplexVector& u, int count) {
    std::vector<int> idx(static_cast<std::size_t>(u.size()));
    std::iota(idx.begin(), idx.end(), 0);
    count = std::min<int>(count, static_cast<int>(idx.size()));
    std::partial_sort(idx.begin(), idx.begin() + count, idx.end(), [&](int a, int b) {
        const double ma = std::abs(u(a));
        const double mb = std::abs(u(b));
        return ma > mb || (ma == mb && a < b);
    });
    idx.resize(static_cast<std::size_t>(count));
    return idx;
}

// Least squares restricted to `support` via the normal equations.
ComplexVector restricted_lsq(const ComplexMatrix& a, const std::vector<int>& support, const ComplexVector& v) {
    ComplexMatrix sub(a.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t i = 0; i < support.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = a.col(support[i]);
    const ComplexMatrix gram = sub.adjoint() * sub;
    const ComplexVector rhs = sub.adjoint() * v;
    return gram.ldlt().solve(rhs);
}

SparseEstimate make_estimate(const SensingCodebook& cb, const ComplexVector& v, std::vector<int> support,
                             const ComplexVector& coeffs, std::vector<double> history) {
    SparseEstimate est;
    est.beta = ComplexVector::Zero(cb.size());
    for (std::size_t i = 0; i < support.size(); ++i) est.beta(support[i]) = coeffs(static_cast<Eigen::Index>(i));
    std::sort(support.begin(), support.end());
    est.support = std::move(support);
    est.residual_norm = (v - cb.matrix * est.beta).norm();
    est.residual_history = std::move(history);
    return est;
}

void check_solver_args(const SensingCodebook& cb, const ComplexVector& v, int k, int iterations) {
    if (v.size() != cb.matrix.rows()) throw std::invalid_argument("solver: observation length mismatch");
    if (k < 0) throw std::invalid_argument("solver: sparsity must be >= 0");
    if (iterations < 0) throw std::invalid_argument("solver: iterations must be >= 0");
}

} // namespace

SparseEstimate mp_solve(const SensingCodebook& codebook, const ComplexVector& v, int k, int iterations) {
    check_solver_args(codebook, v, k, iterations);
    const ComplexMatrix& a = codebook.matrix;
    ComplexVector beta = ComplexVector::Zero(codebook.size());
    ComplexVector residual = v;
    std::vector<int> support;
    std::vector<double> history = {residual.norm()};
    if (k == 0) return make_estimate(codebook, v, {}, ComplexVector(), history);

    const double floor = 1e-14 * std::max(v.norm(), 1e-300);
    for (int it = 0; it < iterations; ++it) {
        const ComplexVector corr = a.adjoint() * residual;
        int best = -1;
        double best_mag = -1.0;
        auto consider = [&](int n) {
            const double mag = std::abs(corr(n)) / a.col(n).norm();
            if (mag > best_mag) {
                best_mag = mag;
                best = n;
            }
        };
        // Once the budget is spent, only atoms already in the support may be refined.
        if (static_cast<int>(support.size()) < k) {
            for (int n = 0; n < codebook.size(); ++n) consider(n);
        } else {
            for (int n : support) consider(n);
        }
        if (best < 0 || best_mag <= floor) break;
        const cplx step = corr(best) / a.col(best).squaredNorm();
        beta(best) += step;
        residual -= step * a.col(best);
        if (std::find(support.begin(), support.end(), best) == support.end()) support.push_back(best);
        history.push_back(residual.norm());
    }
    ComplexVector coeffs(static_cast<Eigen::Index>(support.size()));
    for (std::size_t i = 0; i < support.size(); ++i) coeffs(static_cast<Eigen::Index>(i)) = beta(support[i]);
    return make_estimate(codebook, v, support, coeffs, history);
}

SparseEstimate cosamp_solve(const SensingCodebook& codebook, const ComplexVector& v, int k, int iterations) {
    check_solver_args(codebook, v, k, iterations);
    const ComplexMatrix& a = codebook.matrix;
    std::vector<int> support;
    ComplexVector coeffs;
    ComplexVector residual = v;
    std::vector<double> history = {residual.norm()};
    if (k == 0) return make_estimate(codebook, v, {}, ComplexVector(), history);

    for (int it = 0; it < iterations; ++it) {
        const ComplexVector proxy = a.adjoint() * residual;
        std::vector<int> merged = top_indices(proxy, 2 * k);
        merged.insert(merged.end(), support.begin(), support.end());
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

        const ComplexVector wide = restricted_lsq(a, merged, v);
        std::vector<int> keep_pos = top_indices(wide, k);
        std::vector<int> next;
        for (int pos : keep_pos) next.push_back(merged[static_cast<std::size_t>(pos)]);
        std::sort(next.begin(), next.end());

        // Re-fit on the pruned support so the returned coefficients are unbiased.
        const ComplexVector fitted = restricted_lsq(a, next, v);
        ComplexVector next_residual = v;
        for (std::size_t i = 0; i < next.size(); ++i) next_residual -= fitted(static_cast<Eigen::Index>(i)) * a.col(next[i]);

        if (next_residual.norm() > history.back() && !support.empty()) break;
        const bool unchanged = next == support;
        support = std::move(next);
        coeffs = fitted;
        residual = std::move(next_residual);
        history.push_back(residual.norm());
        if (unchanged || residual.norm() <= 1e-14 * v.norm()) break;
    }
    return make_estimate(codebook, v, support, coeffs, history);
}

SparseEstimate romp_solve(const SensingCodebook& codebook, const ComplexVector& v, int k, int iterations) {
    check_solver_args(codebook, v, k, iterations);
    const ComplexMatrix& a = codebook.matrix;
    std::vector<int> support;
    ComplexVector coeffs;
    ComplexVector residual = v;
    std::vector<double> history = {residual.norm()};
    if (k == 0) return make_estimate(codebook, v, {}, ComplexVector(), history);

    for (int it = 0; it < iterations && static_cast<int>(support.size()) < k; ++it) {
        const ComplexVector u = a.adjoint() * residual;
        std::vector<int> candidates;
        for (int n : top_indices(u, k)) {
            if (std::abs(u(n)) > 0.0 && std::find(support.begin(), support.end(), n) == support.end()) {
                candidates.push_back(n);
            }
        }
        if (candidates.empty()) break;

        // Regularization: among runs of comparable magnitude (max <= 2 min),
        // keep the one carrying the most energy.
        std::size_t best_lo = 0, best_hi = 1;
        double best_energy = -1.0;
        for (std::size_t lo = 0; lo < candidates.size(); ++lo) {
            double energy = 0.0;
            std::size_t hi = lo;
            while (hi < candidates.size() && std::abs(u(candidates[lo])) <= 2.0 * std::abs(u(candidates[hi]))) {
                energy += std::norm(u(candidates[hi]));
                ++hi;
            }
            if (energy > best_energy) {
                best_energy = energy;
                best_lo = lo;
                best_hi = hi;
            }
        }
        for (std::size_t i = best_lo; i < best_hi && static_cast<int>(support.size()) < k; ++i) {
            support.push_back(candidates[i]);
        }
        std::sort(support.begin(), support.end());
        coeffs = restricted_lsq(a, support, v);
        residual = v;
        for (std::size_t i = 0; i < support.size(); ++i) residual -= coeffs(static_cast<Eigen::Index>(i)) * a.col(support[i]);
        history.push_back(residual.norm());
        if (residual.norm() <= 1e-14 * v.norm()) break;
    }
    return make_estimate(codebook, v, support, coeffs, history);
}

std::string to_string(Algorithm algorithm) {
    switch (algorithm) {
    case Algorithm::mp: return "mp";
    case Algorithm::cosamp: return "cosamp";
    case Algorithm::romp: return "romp";
    }
    return "?";
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "mp") return Algorithm::mp;
    if (name == "cosamp") return Algorithm::cosamp;
    if (name == "romp") return Algorithm::romp;
    throw std::invalid_argument("unknown algorithm '" + name + "' (expected mp, cosamp or romp)");
}

SparseEstimate solve(Algorithm algorithm, const SensingCodebook& codebook, const ComplexVector& v, int k,
                     int iterations) {
    switch (algorithm) {
    case Algorithm::mp: return mp_solve(codebook, v, k, iterations);
    case Algorithm::cosamp: return cosamp_solve(codebook, v, k, iterations);
    case Algorithm::romp: return romp_solve(codebook, v, k, iterations);
    }
    throw std::invalid_argument("solve: unknown algorithm");
}

// --- bounds ---

double lasso_error_bound(int m, double sigma_z_sq) {
    if (m < 1) throw std::invalid_argument("lasso_error_bound: m must be >= 1");
    return 4.0 * sigma_z_sq / m;
}

double linf_correlation(const SensingCodebook& codebook, double sigma_z_sq) {
    const int m = codebook.geometry.m();
    const ComplexVector noise = vec_identity(m, sigma_z_sq);
    const ComplexVector corr = codebook.matrix.adjoint() * noise;
    return corr.cwiseAbs().maxCoeff() / m;
}

double mseaoa_upper(double sigma_z_sq, double gamma_max, double lambda_bar_sq, int m) {
    if (!(lambda_bar_sq > 0.0)) throw std::domain_error("mseaoa_upper: lambda_bar_sq must be > 0");
    if (m < 1) throw std::invalid_argument("mseaoa_upper: m must be >= 1");
    const double m2 = static_cast<double>(m) * m;
    return 16.0 * sigma_z_sq * sigma_z_sq * gamma_max / (lambda_bar_sq * m2 * m2);
}

// --- AOA estimators ---

double aoa_estimate_logratio(const ComplexVector& g_hat, ArrayMode mode, const SensingGeometry& geometry,
                             bool resolve_branch) {
    const auto m = static_cast<int>(g_hat.size());
    if (m < 2) throw std::invalid_argument("aoa_estimate_logratio: need at least two elements");
    if (mode == ArrayMode::fas && m != geometry.m()) {
        throw std::invalid_argument("aoa_estimate_logratio: length does not match the array");
    }
    cplx product = 0.0;
    for (int i = 0; i < m; ++i) product += g_hat(i) * g_hat(m - 1 - i);
    if (product == cplx(0.0, 0.0)) throw std::domain_error("aoa_estimate_logratio: transpose-reverse product is zero");

    const double scale = mode == ArrayMode::ula ? std::numbers::pi * (m - 1) : 2.0 * std::numbers::pi * geometry.aperture;
    // Re(log(p / M) / (-j c)) = -arg(p) / c
    const double principal = -std::arg(product / static_cast<double>(m)) / scale;
    if (!resolve_branch) return principal;

    // Coarse, unambiguous estimate from the smallest-lag element pairs.
    std::vector<int> idx(static_cast<std::size_t>(m));
    double lag_scale = std::numbers::pi;
    if (mode == ArrayMode::ula) {
        std::iota(idx.begin(), idx.end(), 0);
    } else {
        idx = geometry.pattern.indices();
        lag_scale = geometry.phase_scale();
    }
    int min_lag = std::numeric_limits<int>::max();
    for (int i = 1; i < m; ++i) min_lag = std::min(min_lag, idx[static_cast<std::size_t>(i)] - idx[static_cast<std::size_t>(i - 1)]);
    cplx lag_sum = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (idx[static_cast<std::size_t>(j)] - idx[static_cast<std::size_t>(i)] == min_lag) {
                lag_sum += g_hat(j) * std::conj(g_hat(i));
            }
        }
    }
    if (lag_sum == cplx(0.0, 0.0)) return principal;
    const double coarse = -std::arg(lag_sum) / (lag_scale * min_lag);

    const double period = 2.0 * std::numbers::pi / scale;
    const double shift = std::round((coarse - principal) / period);
    return principal + shift * period;
}

double aoa_estimate_cs(const SparseEstimate& estimate, const SensingCodebook& codebook) {
    if (estimate.support.empty()) throw std::invalid_argument("aoa_estimate_cs: empty support");
    int best = estimate.support.front();
    for (int n : estimate.support) {
        if (std::abs(estimate.beta(n)) > std::abs(estimate.beta(best))) best = n;
    }
    return codebook.grid[static_cast<std::size_t>(best)];
}

// --- trials ---

SenseTrialResult sense_trial(const SensingCodebook& codebook, const SenseTrialSpec& spec, RandomStream stream) {
    SenseTrialResult out;
    out.true_index = static_cast<int>(stream.below(static_cast<std::uint64_t>(codebook.size())));
    const double truth = codebook.grid[static_cast<std::size_t>(out.true_index)];
    const VirtualObservation obs = spec.mode == ObservationMode::expectation
                                       ? observe_expectation(codebook, out.true_index, spec.sigma_z_sq)
                                       : observe_sampled(codebook, truth, spec.sigma_z_sq, stream);
    const SparseEstimate est = solve(spec.algorithm, codebook, obs.v, spec.sparsity, spec.iterations);
    ComplexVector diff = est.beta;
    diff(out.true_index) -= 1.0;
    out.err_l2 = diff.norm();
    out.bound = lasso_error_bound(codebook.geometry.m(), spec.sigma_z_sq);
    out.support_size = static_cast<int>(est.support.size());
    out.cos_error = est.support.empty() ? std::numeric_limits<double>::quiet_NaN()
                                        : aoa_estimate_cs(est, codebook) - truth;
    return out;
}

std::vector<SenseTrialResult> run_sense_trials(const SensingCodebook& codebook, const SenseTrialSpec& spec,
                                               int trials, const RandomStream& stream) {
    std::vector<SenseTrialResult> out(static_cast<std::size_t>(std::max(trials, 0)));
    parallel_for(trials, [&](std::int64_t t) {
        out[static_cast<std::size_t>(t)] = sense_trial(codebook, spec, stream.for_trial(static_cast<std::uint32_t>(t)));
    });
    return out;
}

namespace reference {

std::vector<SenseTrialResult> run_sense_trials(const SensingCodebook& codebook, const SenseTrialSpec& spec,
                                               int trials, const RandomStream& stream) {
    std::vector<SenseTrialResult> out(static_cast<std::size_t>(std::max(trials, 0)));
    serial_for(trials, [&](std::int64_t t) {
        out[static_cast<std::size_t>(t)] = sense_trial(codebook, spec, stream.for_trial(static_cast<std::uint32_t>(t)));
    });
    return out;
}

} // namespace reference

} // namespace fasisac
