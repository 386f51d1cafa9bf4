// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fasisac/config.hpp"
#include "fasisac/experiments.hpp"

using namespace fasisac;

namespace {

struct Overrides {
    std::vector<std::pair<std::string, std::string>> values;  // applied in order

    void bind(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        app->add_option_function<std::string>(
            flag, [this, key](const std::string& v) { values.emplace_back(key, v); }, help);
    }
    void bind_flag(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        app->add_flag_callback(flag, [this, key] { values.emplace_back(key, "true"); }, help);
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unsourced ISAC bounds with fluid-antenna port selection"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    bool dump = false;
    std::vector<std::string> sets;
    Overrides ov;

    app.add_option("--config", config_path, "INI-style configuration file");
    app.add_option("--out", out_dir, "Write <dir>/<subcommand>.csv instead of stdout");
    app.add_flag("--dump-config", dump, "Print the effective configuration and exit");
    app.add_option("--set", sets, "Override any field as section.key=value (repeatable)");
    ov.bind(&app, "--seed", "mc.seed", "Random seed (default from FASISAC_SEED, else built in)");
    ov.bind(&app, "--threads", "mc.threads", "Worker threads (0: runtime default)");

    std::map<std::string, CLI::App*> subs;
    const auto add_sub = [&](const std::string& name, const std::string& help) {
        CLI::App* s = app.add_subcommand(name, help);
        subs[name] = s;
        return s;
    };

    CLI::App* mra = add_sub("mra", "Minimum-redundancy port patterns and mean index gaps");
    ov.bind(mra, "--m", "sweep.m", "Array size(s)");
    ov.bind(mra, "--cap", "sensing.mra_cap", "Aperture cap (0: m(m-1)/2)");
    ov.bind_flag(mra, "--full-search", "sensing.full_search", "Allow exhaustive search for m > 8");

    CLI::App* gain = add_sub("gain", "Averaged channel gain under optimal port selection");
    ov.bind(gain, "--m", "sweep.antennas", "Array size(s)");
    ov.bind(gain, "--trials", "channel.gain_trials", "Monte Carlo trials");

    CLI::App* sense = add_sub("sense-verify", "Sparse AOA recovery against the Lasso error bound");
    ov.bind(sense, "--m", "sweep.m", "Array size(s)");
    ov.bind(sense, "--snr-db", "sweep.snr_db", "SNR grid, list or lo:hi:step");
    ov.bind(sense, "--trials", "mc.trials", "Trials per point");
    ov.bind(sense, "--algorithms", "sensing.algorithms", "Comma list of mp, cosamp, romp");
    ov.bind(sense, "--mode", "sensing.observation", "expectation or sampled");
    ov.bind_flag(sense, "--ula", "sensing.ula", "Add half-wavelength ULA columns");

    for (const char* name : {"achievable", "floor"}) {
        CLI::App* s = add_sub(name, std::string(name) == "achievable" ? "Achievable E/N0 versus total users"
                                                                      : "Optimistic E/N0 floor versus total users");
        ov.bind(s, "--users", "sweep.users", "Total users, list or lo:hi:step");
        ov.bind(s, "--m", "system.antennas", "Receive antennas");
        ov.bind(s, "--l", "system.blocklength", "Blocklength");
        ov.bind(s, "--gain-mode", "system.gain_mode", "fas or los");
        s->add_option_function<std::string>(
            "--targets",
            [&ov](const std::string& v) {
                const auto comma = v.find(',');
                if (comma == std::string::npos) throw CLI::ValidationError("--targets", "expected pupe,mseaoa");
                ov.values.emplace_back("targets.pupe", v.substr(0, comma));
                ov.values.emplace_back("targets.mseaoa", v.substr(comma + 1));
            },
            "PUPE and MSEAOA targets as pupe,mseaoa");
        if (std::string(name) == "floor") ov.bind(s, "--trials", "mc.capacity_trials", "Capacity Monte Carlo trials");
    }

    CLI::App* ant = add_sub("antennas", "Achievable E/N0 versus receive antennas");
    ov.bind(ant, "--m", "sweep.antennas", "Array sizes, list or lo:hi:step");
    ov.bind(ant, "--users", "system.users", "Total users");
    ov.bind(ant, "--l", "system.blocklength", "Blocklength");
    ov.bind(ant, "--gain-mode", "system.gain_mode", "fas or los");
    ant->add_option_function<std::string>(
        "--targets",
        [&ov](const std::string& v) {
            const auto comma = v.find(',');
            if (comma == std::string::npos) throw CLI::ValidationError("--targets", "expected pupe,mseaoa");
            ov.values.emplace_back("targets.pupe", v.substr(0, comma));
            ov.values.emplace_back("targets.mseaoa", v.substr(comma + 1));
        },
        "PUPE and MSEAOA targets as pupe,mseaoa");

    CLI::App* orc = add_sub("oracle", "Exhaustive projection detector against the Chernoff bound");
    ov.bind(orc, "--trials", "oracle.trials", "Trials per SNR");
    ov.bind(orc, "--snr-db", "oracle.snr_db", "Per-symbol SNR grid");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    ExperimentConfig cfg;
    try {
        cfg = config_path.empty() ? ExperimentConfig::defaults() : load_config(config_path);
        for (const auto& [key, value] : ov.values) set_config_value(cfg, key, value);
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got '" + s + "'");
            set_config_value(cfg, s.substr(0, eq), s.substr(eq + 1));
        }
        cfg.validate();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }

    if (dump) {
        std::cout << dump_config(cfg);
        return kExitOk;
    }

    std::string chosen;
    for (const auto& [name, sub] : subs) {
        if (sub->parsed()) chosen = name;
    }
    if (chosen.empty()) {
        std::cerr << app.help();
        return kExitConfigError;
    }

    RunResult result;
    try {
        result = run(parse_subcommand(chosen), cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitConfigError;
    }

    try {
        if (out_dir.empty()) {
            write_csv(result.table, std::cout);
        } else {
            std::filesystem::create_directories(out_dir);
            emit_csv(result.table, (std::filesystem::path(out_dir) / (chosen + ".csv")).string());
        }
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << '\n';
        return 1;
    }
    for (const auto& line : result.diagnostics) std::cerr << line << '\n';
    return result.exit_code;
}
