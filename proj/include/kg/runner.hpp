#pragma once

#include <iosfwd>
#include <string>

#include "kg/config.hpp"

namespace kg {

// Process exit codes shared by the runner and the CLI wrapper.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_solver_fault = 3;
inline constexpr int exit_strict_undecided = 4;

/// Executes the configured command, writing artifacts under cfg.out_dir:
/// CSV time series for evolve, NDJSON verdicts for classify/sweep, plain
/// text reports for stationary/spectrum/gapcheck. `log` receives a short
/// human-readable summary. Returns one of the exit codes above.
int run(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace kg
