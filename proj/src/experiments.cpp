// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#include "fasisac/experiments.hpp"

#include <cmath>
#include <limits>

#include "fasisac/channel.hpp"
#include "fasisac/floor.hpp"
#include "fasisac/mra.hpp"
#include "fasisac/parallel.hpp"
#include "fasisac/sensing.hpp"

namespace fasisac {

namespace {

const std::vector<std::pair<Subcommand, std::string>>& names() {
    static const std::vector<std::pair<Subcommand, std::string>> table = {
        {Subcommand::mra, "mra"},
        {Subcommand::gain, "gain"},
        {Subcommand::sense_verify, "sense-verify"},
        {Subcommand::achievable, "achievable"},
        {Subcommand::antennas, "antennas"},
        {Subcommand::floor, "floor"},
        {Subcommand::oracle, "oracle"},
    };
    return table;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ChannelParams fas_channel(const ExperimentConfig& cfg, const SensingGeometry& geometry) {
    ChannelParams ch;
    ch.rice_factor = cfg.channel.rice_factor;
    ch.num_scatterers = cfg.channel.scatterers;
    ch.strength = cfg.channel.strength;
    ch.num_ports = geometry.num_ports;
    ch.aperture = geometry.aperture;
    return ch;
}

SensingGeometry geometry_for(int m, GainMode mode) {
    return mode == GainMode::fas ? SensingGeometry::fas(default_array(m)) : SensingGeometry::ula(m);
}

ResultTable new_table(Subcommand cmd, const ExperimentConfig& cfg, std::vector<std::string> columns) {
    ResultTable t;
    t.columns = std::move(columns);
    t.metadata = {{"artifact", kArtifactVersion},
                  {"subcommand", to_string(cmd)},
                  {"config_hash", config_hash(cfg)},
                  {"seed", std::to_string(cfg.mc.seed)}};
    return t;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + std::to_string(v[i]);
    return out;
}

std::string join_strings(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "; " : "") + v[i];
    return out;
}

// --- mra ---

RunResult run_mra(const ExperimentConfig& cfg) {
    RunResult r;
    r.table = new_table(Subcommand::mra, cfg,
                        {"pattern", "aperture", "gap", "m", "source", "tabulated_gap", "gap_delta", "hole_free", "violations"});
    for (long m_long : cfg.sweep.m) {
        const int m = static_cast<int>(m_long);
        if (m <= 8 || cfg.sensing.full_search) {
            MraSearchOptions options;
            options.allow_large = cfg.sensing.full_search;
            const int cap = cfg.sensing.mra_cap > 0 ? cfg.sensing.mra_cap : std::max(m - 1, default_aperture_cap(m));
            for (const auto& p : mra_search(m, cap, options)) {
                const MraCheck check = check_mra(p);
                r.table.add_row({p.to_string(), static_cast<long long>(p.aperture()), expected_index_gap(p),
                                 static_cast<long long>(m), std::string("search"), kNaN, kNaN,
                                 static_cast<long long>(check.holes.empty()), join_strings(check.violations)});
            }
        }
        for (const auto& known : known_arrays()) {
            if (known.m != m) continue;
            const MraCheck check = check_mra(known.pattern);
            const double gap = expected_index_gap(known.pattern);
            std::string violations = join_strings(check.violations);
            if (!check.holes.empty()) violations += " (missing lags " + join_ints(check.holes) + ")";
            r.table.add_row({known.pattern.to_string(), static_cast<long long>(known.pattern.aperture()), gap,
                             static_cast<long long>(m), std::string("table"), known.tabulated_gap, gap - known.tabulated_gap,
                             static_cast<long long>(check.holes.empty()), violations});
        }
    }
    return r;
}

// --- gain ---

RunResult run_gain(const ExperimentConfig& cfg) {
    RunResult r;
    r.table = new_table(Subcommand::gain, cfg, {"m", "pattern", "num_ports", "aperture", "gain", "std_error"});
    for (long m_long : cfg.sweep.antennas) {
        const int m = static_cast<int>(m_long);
        const SensingGeometry geom = SensingGeometry::fas(default_array(m));
        const MeanEstimate g = avg_channel_gain(fas_channel(cfg, geom), m, cfg.channel.gain_trials,
                                                RandomStream(cfg.mc.seed, stream_id("gain", m)));
        r.table.add_row({m_long, geom.pattern.to_string(), static_cast<long long>(geom.num_ports), geom.aperture, g.mean,
                         g.std_error});
    }
    return r;
}

// --- sense-verify ---

RunResult run_sense_verify(const ExperimentConfig& cfg) {
    RunResult r;
    std::vector<std::string> cols = {"algorithm", "m", "snr_db", "trial", "true_index", "err_l2", "bound", "violation"};
    if (cfg.sensing.ula) {
        cols.insert(cols.end(), {"ula_err_l2", "ula_bound", "ula_violation"});
    }
    r.table = new_table(Subcommand::sense_verify, cfg, cols);

    for (long m_long : cfg.sweep.m) {
        const int m = static_cast<int>(m_long);
        const SensingCodebook fas = build_codebook(SensingGeometry::fas(default_array(m)), cfg.sensing.samples);
        SensingCodebook ula;
        if (cfg.sensing.ula) ula = build_codebook(SensingGeometry::ula(m), cfg.sensing.samples);
        for (std::size_t si = 0; si < cfg.sweep.snr_db.size(); ++si) {
            const double snr = cfg.sweep.snr_db[si];
            const RandomStream stream(cfg.mc.seed, stream_id("sense", m, static_cast<long>(si)));
            for (Algorithm alg : cfg.sensing.algorithms) {
                SenseTrialSpec spec;
                spec.algorithm = alg;
                spec.sigma_z_sq = std::pow(10.0, -snr / 10.0);
                spec.sparsity = cfg.sensing.sparsity;
                spec.iterations = cfg.sensing.iterations;
                spec.mode = cfg.sensing.observation;
                const auto res = run_sense_trials(fas, spec, cfg.mc.trials, stream);
                std::vector<SenseTrialResult> ula_res;
                if (cfg.sensing.ula) ula_res = run_sense_trials(ula, spec, cfg.mc.trials, stream);
                for (std::size_t t = 0; t < res.size(); ++t) {
                    std::vector<Cell> row = {to_string(alg), m_long, snr, static_cast<long long>(t),
                                             static_cast<long long>(res[t].true_index), res[t].err_l2, res[t].bound,
                                             static_cast<long long>(res[t].err_l2 > res[t].bound)};
                    if (cfg.sensing.ula) {
                        row.insert(row.end(), {ula_res[t].err_l2, ula_res[t].bound,
                                               static_cast<long long>(ula_res[t].err_l2 > ula_res[t].bound)});
                    }
                    r.table.add_row(row);
                }
            }
        }
    }
    return r;
}

// --- achievable / antennas ---

std::vector<Cell> frontier_cells(const FrontierPoint& f) {
    return {f.breakdown.e_n0_db, f.breakdown.eps_cons, f.breakdown.eps_coll, f.breakdown.eps_md,
            f.breakdown.mseaoa,  f.binding,            f.breakdown.pupe,     f.backoff};
}

std::vector<Cell> infeasible_cells(const std::string& binding) {
    return {kNaN, kNaN, kNaN, kNaN, kNaN, binding, kNaN, kNaN};
}

const std::vector<std::string> kFrontierCols = {"e_n0_db",       "eps_cons",           "eps_coll", "eps_md",
                                                "mseaoa_bound",  "binding_constraint", "pupe",     "backoff"};

AchievabilityOptions achievability_options(const ExperimentConfig& cfg) {
    AchievabilityOptions o;
    o.cons_share = cfg.targets.cons_share;
    return o;
}

RunResult run_achievable(const ExperimentConfig& cfg) {
    RunResult r;
    std::vector<std::string> cols = {"users"};
    cols.insert(cols.end(), kFrontierCols.begin(), kFrontierCols.end());
    cols.insert(cols.end(), {"gain", "gain_mode"});
    r.table = new_table(Subcommand::achievable, cfg, cols);
    for (long users : cfg.sweep.users) {
        const SystemConfig sys = make_system(cfg, users, cfg.system.antennas, cfg.system.gain_mode);
        std::vector<Cell> row = {users};
        try {
            const auto part = frontier_cells(
                min_energy_achievable(sys, cfg.targets.pupe, cfg.targets.mseaoa, achievability_options(cfg)));
            row.insert(row.end(), part.begin(), part.end());
        } catch (const InfeasibleError& e) {
            const auto part = infeasible_cells(e.binding());
            row.insert(row.end(), part.begin(), part.end());
            r.exit_code = kExitInfeasible;
            r.diagnostics.push_back("users=" + std::to_string(users) + ": infeasible (" + e.binding() + "): " + e.what());
        }
        row.insert(row.end(), {sys.gain, to_string(cfg.system.gain_mode)});
        r.table.add_row(row);
    }
    return r;
}

RunResult run_antennas(const ExperimentConfig& cfg) {
    RunResult r;
    std::vector<std::string> cols = {"m"};
    cols.insert(cols.end(), kFrontierCols.begin(), kFrontierCols.end());
    cols.insert(cols.end(), {"gain", "gamma_max", "lambda_bar_sq", "gain_mode"});
    r.table = new_table(Subcommand::antennas, cfg, cols);
    for (long m : cfg.sweep.antennas) {
        const SystemConfig sys = make_system(cfg, cfg.system.users, static_cast<int>(m), cfg.system.gain_mode);
        std::vector<Cell> row = {m};
        try {
            const auto part = frontier_cells(
                min_energy_achievable(sys, cfg.targets.pupe, cfg.targets.mseaoa, achievability_options(cfg)));
            row.insert(row.end(), part.begin(), part.end());
        } catch (const InfeasibleError& e) {
            const auto part = infeasible_cells(e.binding());
            row.insert(row.end(), part.begin(), part.end());
            r.exit_code = kExitInfeasible;
            r.diagnostics.push_back("m=" + std::to_string(m) + ": infeasible (" + e.binding() + "): " + e.what());
        }
        row.insert(row.end(), {sys.gain, sys.gamma_max, sys.lambda_bar_sq, to_string(cfg.system.gain_mode)});
        r.table.add_row(row);
    }
    return r;
}

// --- floor ---

RunResult run_floor(const ExperimentConfig& cfg) {
    RunResult r;
    r.table = new_table(Subcommand::floor, cfg,
                        {"users", "e_n0_db", "binding_constraint", "capacity_mean", "capacity_stderr", "rate",
                         "pupe_floor", "crlb", "gain_mode"});
    const int m = cfg.system.antennas;
    for (long users : cfg.sweep.users) {
        const SystemConfig sys = make_system(cfg, users, m, cfg.system.gain_mode);
        const double rate = (static_cast<double>(sys.bits_c) * sys.users_c + static_cast<double>(sys.bits_s) * sys.users_s) /
                            static_cast<double>(sys.blocklength);
        try {
            const FloorPoint f = min_energy_floor(sys, cfg.targets.pupe, cfg.targets.mseaoa,
                                                  capacity_channel(cfg, sys, cfg.system.gain_mode), cfg.mc.capacity_trials,
                                                  RandomStream(cfg.mc.seed, stream_id("floor", users, m)));
            r.table.add_row({users, f.e_n0_db, f.binding, f.capacity.mean, f.capacity.std_error, rate, f.pupe_floor, f.crlb,
                             to_string(cfg.system.gain_mode)});
        } catch (const InfeasibleError& e) {
            r.table.add_row({users, kNaN, e.binding(), kNaN, kNaN, rate, pupe_floor(sys), kNaN, to_string(cfg.system.gain_mode)});
            r.exit_code = kExitInfeasible;
            r.diagnostics.push_back("users=" + std::to_string(users) + ": infeasible (" + e.binding() + "): " + e.what());
        }
    }
    return r;
}

// --- oracle ---

RunResult run_oracle(const ExperimentConfig& cfg) {
    RunResult r;
    r.table = new_table(Subcommand::oracle, cfg,
                        {"snr_db", "k_s", "k_c", "empirical", "std_error", "analytic", "log_analytic", "within"});
    const auto& o = cfg.oracle;
    SystemConfig sys;
    sys.bits_c = o.bits_c;
    sys.bits_s = o.bits_s;
    sys.users_c = o.users_c;
    sys.users_s = o.users_s;
    sys.blocklength = o.blocklength;
    sys.noise_var = cfg.system.noise_var;
    sys.gain_scope = cfg.system.gain_scope;
    sys.geometry = SensingGeometry::fas(default_array(o.antennas));
    const ChannelParams channel = fas_channel(cfg, sys.geometry);
    sys.gain = avg_channel_gain(channel, o.antennas, cfg.channel.gain_trials,
                                RandomStream(cfg.mc.seed, stream_id("oracle-gain", o.antennas)))
                   .mean;

    for (std::size_t si = 0; si < o.snr_db.size(); ++si) {
        const double snr = o.snr_db[si];
        const PowerAssignment powers = PowerAssignment::equal(sys.noise_var * std::pow(10.0, snr / 10.0), 1.0);
        const OracleTable table = detection_oracle(sys, powers, channel, o.trials,
                                                   RandomStream(cfg.mc.seed, stream_id("oracle", static_cast<long>(si))));
        for (long ks = 0; ks <= sys.users_s; ++ks) {
            for (long kc = 0; kc <= sys.users_c; ++kc) {
                const double f = table.frequency(ks, kc);
                const double se = table.std_error(ks, kc);
                const double bound = p_ks_kc(sys, powers, ks, kc);
                r.table.add_row({snr, static_cast<long long>(ks), static_cast<long long>(kc), f, se, bound,
                                 log_p_ks_kc(sys, powers, ks, kc), static_cast<long long>(f <= bound + 3.0 * se)});
            }
        }
    }
    return r;
}

} // namespace

std::string to_string(Subcommand cmd) {
    for (const auto& [c, n] : names()) {
        if (c == cmd) return n;
    }
    return "?";
}

Subcommand parse_subcommand(const std::string& name) {
    for (const auto& [c, n] : names()) {
        if (n == name) return c;
    }
    throw std::invalid_argument("unknown subcommand '" + name + "'");
}

const std::vector<Subcommand>& all_subcommands() {
    static const std::vector<Subcommand> all = [] {
        std::vector<Subcommand> v;
        for (const auto& entry : names()) v.push_back(entry.first);
        return v;
    }();
    return all;
}

std::uint64_t stream_id(const std::string& tag, long a, long b) {
    std::uint32_t h = 2166136261U;
    const auto feed = [&h](const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 16777619U;
        }
    };
    feed(tag.data(), tag.size());
    const std::int64_t vals[2] = {a, b};
    for (std::int64_t v : vals) {
        unsigned char bytes[8];
        for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(static_cast<std::uint64_t>(v) >> (8 * i));
        feed(bytes, sizeof bytes);
    }
    return h;
}

SystemConfig make_system(const ExperimentConfig& cfg, long users, int m, GainMode mode) {
    SystemConfig sys;
    sys.bits_c = cfg.system.bits_c;
    sys.bits_s = cfg.system.bits_s;
    sys.users_c = cfg.cu_users(users);
    sys.users_s = users - sys.users_c;
    sys.blocklength = cfg.system.blocklength;
    sys.noise_var = cfg.system.noise_var;
    sys.gain_scope = cfg.system.gain_scope;
    sys.geometry = geometry_for(m, mode);
    if (mode == GainMode::fas) {
        sys.gain = avg_channel_gain(fas_channel(cfg, sys.geometry), m, cfg.channel.gain_trials,
                                    RandomStream(cfg.mc.seed, stream_id("gain", m)))
                       .mean;
    } else {
        sys.gain = 1.0;
    }
    sys.gamma_max = build_codebook(sys.geometry, cfg.sensing.samples).gamma_max;
    sys.lambda_bar_sq = lambda_bar_sq(sys.geometry.pattern, sys.geometry.aperture, sys.geometry.num_ports);
    return sys;
}

ChannelParams capacity_channel(const ExperimentConfig& cfg, const SystemConfig& sys, GainMode mode) {
    if (mode == GainMode::los) return ChannelParams::los_only_channel(sys.antennas(), 0.5 * (sys.antennas() - 1));
    return fas_channel(cfg, sys.geometry);
}

RunResult run(Subcommand cmd, const ExperimentConfig& cfg) {
    cfg.validate();
    set_worker_threads(cfg.mc.threads);
    switch (cmd) {
    case Subcommand::mra: return run_mra(cfg);
    case Subcommand::gain: return run_gain(cfg);
    case Subcommand::sense_verify: return run_sense_verify(cfg);
    case Subcommand::achievable: return run_achievable(cfg);
    case Subcommand::antennas: return run_antennas(cfg);
    case Subcommand::floor: return run_floor(cfg);
    case Subcommand::oracle: return run_oracle(cfg);
    }
    throw std::logic_error("unhandled subcommand");
}

} // namespace fasisac
