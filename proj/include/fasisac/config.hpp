// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#ifndef FASISAC_CONFIG_HPP
#define FASISAC_CONFIG_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fasisac/bounds.hpp"
#include "fasisac/sensing.hpp"

namespace fasisac {

enum class GainMode { fas, los };
std::string to_string(GainMode mode);
GainMode parse_gain_mode(const std::string& text);

constexpr std::uint64_t kDefaultSeed = 20260101;
constexpr const char* kSeedEnvVar = "FASISAC_SEED";

struct ExperimentConfig {
    struct System {
        int bits_c = 100;
        int bits_s = 100;
        long users = 100;          // total; split by cu_share
        double cu_share = 0.5;
        long blocklength = 5000;
        int antennas = 10;
        double noise_var = 1.0;
        GainMode gain_mode = GainMode::fas;
        GainScope gain_scope = GainScope::both;
    } system;

    struct Channel {
        double rice_factor = 0.5;
        int scatterers = 3;
        double strength = 1.0;
        int gain_trials = 2000;
    } channel;

    struct Sensing {
        int samples = 90;
        int sparsity = 1;
        int iterations = 10;
        std::vector<Algorithm> algorithms{Algorithm::mp, Algorithm::cosamp, Algorithm::romp};
        ObservationMode observation = ObservationMode::expectation;
        bool ula = false;
        int mra_cap = 0;  // 0: m(m-1)/2
        bool full_search = false;
    } sensing;

    struct Targets {
        double pupe = 0.1;
        double mseaoa = 5e-4;
        double cons_share = 0.01;
    } targets;

    struct Sweep {
        std::vector<long> users{100, 200, 400, 800, 1400};
        std::vector<long> antennas{3, 5, 7, 9, 11};
        std::vector<long> m{3, 5, 11};
        std::vector<double> snr_db{-10, -5, 0, 5, 10, 15, 20};
    } sweep;

    struct Mc {
        std::uint64_t seed = kDefaultSeed;
        int trials = 200;
        int capacity_trials = 500;
        int threads = 0;  // 0: runtime default
    } mc;

    struct Oracle {
        int bits_c = 3;
        int bits_s = 3;
        long users_c = 2;
        long users_s = 1;
        long blocklength = 50;
        int antennas = 2;
        std::vector<double> snr_db{-15, -10, -5, 0, 5};
        int trials = 2000;
    } oracle;

    /// Defaults, with the seed taken from FASISAC_SEED when set.
    static ExperimentConfig defaults();
    /// Throws ConfigError on out-of-range values.
    void validate() const;
    /// Number of communication users out of `total`.
    [[nodiscard]] long cu_users(long total) const;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Applies an INI-style document on top of `base`. Errors name the line and key.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = ExperimentConfig::defaults());
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = ExperimentConfig::defaults());

/// Sets one field addressed as "section.key".
void set_config_value(ExperimentConfig& cfg, const std::string& dotted_key, const std::string& value);

/// Canonical text form; parse_config(dump_config(c)) reproduces c.
std::string dump_config(const ExperimentConfig& cfg);

/// FNV-1a of the canonical dump without the thread count, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

/// "a,b,c" or "lo:hi:step" (inclusive).
std::vector<double> parse_real_list(const std::string& text);
std::vector<long> parse_integer_list(const std::string& text);

} // namespace fasisac

#endif // FASISAC_CONFIG_HPP
