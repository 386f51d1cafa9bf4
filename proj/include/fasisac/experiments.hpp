// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#ifndef FASISAC_EXPERIMENTS_HPP
#define FASISAC_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "fasisac/bounds.hpp"
#include "fasisac/config.hpp"
#include "fasisac/results.hpp"

namespace fasisac {

enum class Subcommand { mra, gain, sense_verify, achievable, antennas, floor, oracle };

std::string to_string(Subcommand cmd);
Subcommand parse_subcommand(const std::string& name);
const std::vector<Subcommand>& all_subcommands();

enum ExitCode { kExitOk = 0, kExitInfeasible = 2, kExitConfigError = 3 };

struct RunResult {
    ResultTable table;
    int exit_code = kExitOk;
    std::vector<std::string> diagnostics;  ///< one line per infeasible point
};

/// Runs one experiment. Output depends only on the config (thread count excluded).
RunResult run(Subcommand cmd, const ExperimentConfig& cfg);

/// Operating point for `users` total users on an M-element array in the given mode.
/// The gain estimate and codebook depend only on (mode, M, channel, seed).
SystemConfig make_system(const ExperimentConfig& cfg, long users, int m, GainMode mode);

/// Channel used for capacity draws: the fluid antenna behind the sensing
/// array, or a LOS-only half-wavelength ULA.
ChannelParams capacity_channel(const ExperimentConfig& cfg, const SystemConfig& sys, GainMode mode);

/// Stable 32-bit stream identifier for a named experiment and its indices.
std::uint64_t stream_id(const std::string& tag, long a = 0, long b = 0);

} // namespace fasisac

#endif // FASISAC_EXPERIMENTS_HPP
