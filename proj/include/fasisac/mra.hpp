// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#ifndef FASISAC_MRA_HPP
#define FASISAC_MRA_HPP

#include <optional>
#include <string>
#include <vector>

#include "fasisac/ports.hpp"

namespace fasisac {

/// Weight function of a difference co-array: w(x) counts ordered index
/// pairs (m, n), m == n included, with N_m - N_n = x.
class WeightFunction {
public:
    WeightFunction(int max_lag, std::vector<int> counts) : max_lag_(max_lag), counts_(std::move(counts)) {}

    [[nodiscard]] int max_lag() const { return max_lag_; }
    [[nodiscard]] int operator()(int x) const {
        if (x < -max_lag_ || x > max_lag_) return 0;
        return counts_[static_cast<std::size_t>(x + max_lag_)];
    }
    /// Lags with nonzero weight, ascending.
    [[nodiscard]] std::vector<int> support() const;
    /// Lags in [-max_lag, max_lag] with zero weight.
    [[nodiscard]] std::vector<int> holes() const;

private:
    int max_lag_;
    std::vector<int> counts_;
};

WeightFunction dca(const PortPattern& pattern);

struct MraCheck {
    bool ok = false;
    std::vector<int> holes;              ///< missing lags in [0, aperture]
    std::vector<std::string> violations; ///< human-readable constraint failures
};

/// Hole-free co-array over [-A, A], A = max index, plus the four weight
/// constraints (w(0) = M, 1 <= w(x) <= M-1 off the origin, symmetry, and the
/// M(M-1) pair count).
MraCheck check_mra(const PortPattern& pattern);

struct MraSearchOptions {
    /// Required for m > 8; the search space grows steeply with m.
    bool allow_large = false;
};

/// All hole-free size-m arrays with the largest aperture <= aperture_cap,
/// mirror images included, sorted lexicographically.
std::vector<PortPattern> mra_search(int m, int aperture_cap, const MraSearchOptions& options = {});

/// Default search cap: the pair-count ceiling m(m-1)/2.
int default_aperture_cap(int m);

/// Mean of |N_m - N_n| over all M^2 ordered pairs.
double expected_index_gap(const PortPattern& pattern);

/// (2 pi E|N_m - N_n| W / (N_f - 1))^2
double lambda_bar_sq(const PortPattern& pattern, double aperture, int num_ports);

/// Restricted minimum-redundancy arrays with their tabulated mean lag.
struct KnownArray {
    int m;
    PortPattern pattern;
    double tabulated_gap;
};

const std::vector<KnownArray>& known_arrays();

/// Array used for an m-port configuration: the first tabulated array of that
/// size that passes check_mra, otherwise the first hit of mra_search.
PortPattern default_array(int m);

} // namespace fasisac

#endif // FASISAC_MRA_HPP
