// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fasisac/bounds.hpp"
#include "fasisac/parallel.hpp"

namespace fasisac {

double OracleTable::frequency(long k_s, long k_c) const {
    if (k_s < 0 || k_s > users_s || k_c < 0 || k_c > users_c) throw std::out_of_range("OracleTable: index out of range");
    if (trials == 0) return 0.0;
    return static_cast<double>(counts[static_cast<std::size_t>(k_s * (users_c + 1) + k_c)]) / trials;
}

double OracleTable::std_error(long k_s, long k_c) const {
    if (trials == 0) return 0.0;
    const double f = frequency(k_s, k_c);
    return std::sqrt(f * (1.0 - f) / trials);
}

namespace {

constexpr long kMaxCodewords = 64;
constexpr long kMaxUsers = 3;

void check_budget(const SystemConfig& cfg, const ChannelParams& channel, int trials) {
    cfg.validate();
    channel.validate();
    if (trials < 1) throw std::invalid_argument("detection_oracle: trials must be >= 1");
    if (cfg.bits_c > 6 || cfg.bits_s > 6 || (1L << cfg.bits_c) + (1L << cfg.bits_s) > kMaxCodewords) {
        throw std::invalid_argument("detection_oracle: more than 64 codewords exceeds the enumeration budget");
    }
    if (cfg.total_users() > kMaxUsers) throw std::invalid_argument("detection_oracle: more than 3 users exceeds the enumeration budget");
    if (cfg.users_c > (1L << cfg.bits_c) || cfg.users_s > (1L << cfg.bits_s)) {
        throw std::invalid_argument("detection_oracle: more users than codewords");
    }
    if (channel.num_ports < cfg.antennas()) throw std::invalid_argument("detection_oracle: fewer ports than antennas");
}

// All size-k subsets of {0, ..., n-1}, lexicographic.
std::vector<std::vector<int>> subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(k));
    std::iota(cur.begin(), cur.end(), 0);
    if (k > n) return out;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

std::vector<int> draw_distinct(int n, int k, RandomStream& stream) {
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) {
        const auto j = i + static_cast<int>(stream.below(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    std::vector<int> out(pool.begin(), pool.begin() + k);
    std::sort(out.begin(), out.end());
    return out;
}

long misses(const std::vector<int>& truth, const std::vector<int>& declared) {
    long n = 0;
    for (int t : truth) {
        if (std::find(declared.begin(), declared.end(), t) == declared.end()) ++n;
    }
    return n;
}

struct Candidates {
    std::vector<std::vector<int>> cu;
    std::vector<std::vector<int>> su;
};

// One trial; returns the flat (k_s, k_c) cell.
long oracle_trial(const SystemConfig& cfg, const PowerAssignment& powers, const ChannelParams& channel,
                  const Candidates& cand, RandomStream stream) {
    const int rc = 1 << cfg.bits_c;
    const int rs = 1 << cfg.bits_s;
    const int rows = rc + rs;
    const auto l = static_cast<Eigen::Index>(cfg.blocklength);
    const int m = cfg.antennas();

    ComplexMatrix codebook(rows, l);
    for (int r = 0; r < rows; ++r) {
        const double var = r < rc ? powers.p_c : powers.p_s;
        for (Eigen::Index i = 0; i < l; ++i) codebook(r, i) = complex_gaussian(stream, var);
    }
    const std::vector<int> active_c = draw_distinct(rc, static_cast<int>(cfg.users_c), stream);
    const std::vector<int> active_s = draw_distinct(rs, static_cast<int>(cfg.users_s), stream);

    ComplexMatrix y = ComplexMatrix::Zero(m, l);
    const auto add_user = [&](int row) {
        const double theta = std::numbers::pi * stream.uniform_open();
        const ChannelRealization real = gen_fas_channel(channel, theta, stream);
        const ComplexVector g = select_ports_optimal(real, m).values;
        y.noalias() += g * codebook.row(row);
    };
    for (int r : active_c) add_user(r);
    for (int r : active_s) add_user(rc + r);
    for (Eigen::Index i = 0; i < l; ++i) {
        for (int a = 0; a < m; ++a) y(a, i) += complex_gaussian(stream, cfg.noise_var);
    }

    // ||Y f_p(A_d)||^2 = ||Y||^2 - tr(C_d G_d^-1 C_d^H) with C = Y A^H and G = A A^H,
    // so the detector maximizes the projected energy.
    const ComplexMatrix cross = y * codebook.adjoint();
    const ComplexMatrix gram = codebook * codebook.adjoint();

    double best = -1.0;
    const std::vector<int>* best_c = nullptr;
    const std::vector<int>* best_s = nullptr;
    for (const auto& cset : cand.cu) {
        for (const auto& sset : cand.su) {
            std::vector<int> idx = cset;
            for (int s : sset) idx.push_back(rc + s);
            double proj = 0.0;
            if (!idx.empty()) {
                const auto k = static_cast<Eigen::Index>(idx.size());
                ComplexMatrix gs(k, k);
                ComplexMatrix cs(m, k);
                for (Eigen::Index a = 0; a < k; ++a) {
                    cs.col(a) = cross.col(idx[static_cast<std::size_t>(a)]);
                    for (Eigen::Index b = 0; b < k; ++b) {
                        gs(a, b) = gram(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
                    }
                }
                const ComplexMatrix x = gs.ldlt().solve(cs.adjoint());
                proj = (cs * x).trace().real();
            }
            if (proj > best) {
                best = proj;
                best_c = &cset;
                best_s = &sset;
            }
        }
    }
    const long kc = misses(active_c, *best_c);
    const long ks = misses(active_s, *best_s);
    return ks * (cfg.users_c + 1) + kc;
}

template <class Loop>
OracleTable oracle_with(const SystemConfig& cfg, const PowerAssignment& powers, const ChannelParams& channel,
                        int trials, const RandomStream& stream, Loop&& loop) {
    check_budget(cfg, channel, trials);
    powers.validate();
    const Candidates cand{subsets(1 << cfg.bits_c, static_cast<int>(cfg.users_c)),
                          subsets(1 << cfg.bits_s, static_cast<int>(cfg.users_s))};
    std::vector<long> cells(static_cast<std::size_t>(trials));
    loop(trials, [&](std::int64_t t) {
        cells[static_cast<std::size_t>(t)] =
            oracle_trial(cfg, powers, channel, cand, stream.for_trial(static_cast<std::uint32_t>(t)));
    });

    OracleTable table;
    table.users_s = cfg.users_s;
    table.users_c = cfg.users_c;
    table.trials = trials;
    table.counts.assign(static_cast<std::size_t>((cfg.users_s + 1) * (cfg.users_c + 1)), 0);
    for (long cell : cells) ++table.counts[static_cast<std::size_t>(cell)];
    return table;
}

} // namespace

OracleTable detection_oracle(const SystemConfig& cfg, const PowerAssignment& powers, const ChannelParams& channel,
                             int trials, const RandomStream& stream) {
    return oracle_with(cfg, powers, channel, trials, stream,
                       [](std::int64_t n, auto&& body) { parallel_for(n, body); });
}

namespace reference {
OracleTable detection_oracle(const SystemConfig& cfg, const PowerAssignment& powers, const ChannelParams& channel,
                             int trials, const RandomStream& stream) {
    return oracle_with(cfg, powers, channel, trials, stream,
                       [](std::int64_t n, auto&& body) { serial_for(n, body); });
}
} // namespace reference

} // namespace fasisac
