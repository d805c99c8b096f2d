#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "nanotalbot/phase_space.hpp"

namespace nanotalbot::cli {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_config = 2 };

struct GlobalOptions {
  std::vector<std::filesystem::path> configs;
  std::filesystem::path out = "runs";
  int jobs = 1;
  std::optional<std::uint64_t> seed;
};

struct FringeOptions {
  bool compare = false;
};

struct ShotsOptions {
  std::optional<std::size_t> shots;
  std::optional<std::size_t> repeats;
};

/// Each command writes into a fresh run directory and returns an exit code.
/// ConfigError propagates to the caller.
int cmd_fringe(const GlobalOptions& g, const FringeOptions& opts, std::ostream& log);
int cmd_oracle_check(const GlobalOptions& g, std::ostream& log);
int cmd_exclusion(const GlobalOptions& g, std::ostream& log);
int cmd_beta(const GlobalOptions& g, std::ostream& log);
int cmd_forces(const GlobalOptions& g, std::ostream& log);
int cmd_shots(const GlobalOptions& g, const ShotsOptions& opts, std::ostream& log);

/// Pipeline request for a loaded configuration at the given acceleration.
PipelineRequest pipeline_request(const ExperimentConfig& c, double acceleration);

/// Converts an exclusion-ready configuration into a sensitivity scenario.
ExclusionScenario exclusion_scenario(const ExperimentConfig& c);

/// Converts a configuration into the error-budget inputs.
BudgetConfig budget_config(const ExperimentConfig& c);

}  // namespace nanotalbot::cli
