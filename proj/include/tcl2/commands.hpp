#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tcl2/config.hpp"

namespace tcl2 {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitPartial = 4,
};

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  unsigned jobs = 0;  // 0 = all cores
};

struct CommandResult {
  int exit_code = kExitOk;
  std::vector<std::string> outputs;  // file names relative to out_dir, manifest last
  std::string message;               // empty on success
};

/// trajectory.csv: t, rho11, rho22, rho33, re_rho12, im_rho12, min_eig, trace.
CommandResult cmd_evolve(const RunConfig& config, const CommandOptions& options);

/// stationary.json with the null-space state, its residual, the
/// z-extrapolated cross-check and the distance to the Gibbs state.
CommandResult cmd_steady(const RunConfig& config, const CommandOptions& options);

/// sweep.csv in long format: axis values, observable, value, status.
CommandResult cmd_sweep(const RunConfig& config, const CommandOptions& options);

/// positivity.csv (beta, v12, min_eig, status) and positivity_summary.json
/// with the sign boundary.  Uses the config's sweep axes when they are beta
/// and v12, else the default 21 x 21 grid.
CommandResult cmd_positivity_scan(const RunConfig& config, const CommandOptions& options);

/// compare.csv: t, then rho33 for each of config.compare_modes; plus
/// compare_summary.json with the first sign change of rho33 per mode.
CommandResult cmd_compare_modes(const RunConfig& config, const CommandOptions& options);

/// Formats with 17 significant digits ("nan" for missing values).
std::string format_number(double value);

}  // namespace tcl2
