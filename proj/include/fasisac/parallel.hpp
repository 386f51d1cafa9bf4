// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#ifndef FASISAC_PARALLEL_HPP
#define FASISAC_PARALLEL_HPP

#include <cmath>
#include <cstdint>
#include <span>

namespace fasisac {

// Per-trial results are always written to an indexed slot and reduced in
// index order afterwards, so the thread count never changes the bits.

/// Sets the OpenMP team size (0 keeps the runtime default).
void set_worker_threads(int threads);
int worker_threads();

template <class Body>
void parallel_for(std::int64_t n, Body&& body) {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < n; ++i) body(i);
}

template <class Body>
void serial_for(std::int64_t n, Body&& body) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
}

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Sample mean and its standard error, accumulated in index order.
inline MeanEstimate summarize(std::span<const double> values) {
    MeanEstimate out;
    if (values.empty()) return out;
    double sum = 0.0;
    for (double v : values) sum += v;
    const auto n = static_cast<double>(values.size());
    out.mean = sum / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.std_error = std::sqrt(ss / (n - 1.0) / n);
    }
    return out;
}

} // namespace fasisac

#endif // FASISAC_PARALLEL_HPP
