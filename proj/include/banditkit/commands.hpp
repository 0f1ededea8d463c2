#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>

#include "banditkit/config.hpp"

namespace banditkit {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitInvalidConfig = 2,
  kExitIoError = 3,
};

struct CommandOptions {
  std::optional<std::filesystem::path> out_dir;  // falls back to config "output", then "."
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;  // overrides the config seed
};

/// Writes simulate.csv (aggregate statistics) and simulate.json (config echo
/// plus base seed) into out_dir.
int cmd_simulate(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log);

/// Simulates the configured policy and checks the configured bound at every
/// checkpoint; writes verify.csv and prints a PASS/FAIL line per checkpoint.
/// Returns kExitCheckFailed when any checkpoint fails.
int cmd_verify(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log);

/// Writes curves.csv with every requested curve on the checkpoint grid.
int cmd_curves(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log);

/// Fits the regret growth exponent over the configured window; writes
/// exponent.json and simulate-style statistics to exponent.csv.
int cmd_exponent(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log);

/// Reads the config file, applies overrides and dispatches `command`
/// ("simulate", "verify", "curves", "exponent"). Config errors print
/// `<path>:<line>: <message>` to `err` and return kExitInvalidConfig.
int run_command(std::string_view command, const std::filesystem::path& config_path,
                const CommandOptions& options, std::ostream& log, std::ostream& err);

}  // namespace banditkit
