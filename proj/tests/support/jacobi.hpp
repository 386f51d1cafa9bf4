// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#ifndef FASISAC_TESTS_JACOBI_HPP
#define FASISAC_TESTS_JACOBI_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "fasisac/numerics.hpp"

namespace fasisac::testing {

// Cyclic Jacobi on the real symmetric embedding [[Re, -Im], [Im, Re]] of a
// Hermitian matrix; each eigenvalue of the original appears twice.
inline std::vector<double> jacobi_eigenvalues(const ComplexMatrix& h) {
    const auto n = static_cast<int>(h.rows());
    const int r = 2 * n;
    std::vector<double> a(static_cast<std::size_t>(r * r));
    const auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i * r + j)]; };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            at(i, j) = h(i, j).real();
            at(i + n, j + n) = h(i, j).real();
            at(i, j + n) = -h(i, j).imag();
            at(i + n, j) = h(i, j).imag();
        }
    }
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < r; ++i) {
            for (int j = i + 1; j < r; ++j) off += at(i, j) * at(i, j);
        }
        if (off < 1e-30) break;
        for (int p = 0; p < r; ++p) {
            for (int q = p + 1; q < r; ++q) {
                if (std::abs(at(p, q)) < 1e-300) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < r; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < r; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) ev[static_cast<std::size_t>(i)] = at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

inline double jacobi_largest(const ComplexMatrix& h) { return jacobi_eigenvalues(h).back(); }

} // namespace fasisac::testing

#endif // FASISAC_TESTS_JACOBI_HPP
