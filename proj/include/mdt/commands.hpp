#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdt/config.hpp"
#include "mdt/report.hpp"

namespace mdt {

enum ExitCode : int { kExitOk = 0, kExitFinding = 1, kExitUsage = 2, kExitNumeric = 3 };

struct CommandResult {
  int exit_code = kExitOk;
  std::string command;
  std::string config_digest;
  std::vector<Finding> findings;
  bool pass = true;
  // Extra command-specific fields merged into the report.
  nlohmann::json details = nlohmann::json::object();
  std::vector<std::string> outputs;

  // {command, config_digest, findings:[{kind, location, margin}], pass}
  nlohmann::json report() const;
};

// Each command writes its files under config.out and the JSON report to
// <out>/<command>_report.json; progress and diagnostics go to `log`.
CommandResult cmd_sweep(const RunConfig& config, std::ostream& log);
CommandResult cmd_check(const RunConfig& config, std::ostream& log);
CommandResult cmd_oracle(const RunConfig& config, std::ostream& log);
CommandResult cmd_maxpres(const RunConfig& config, std::ostream& log);
CommandResult cmd_bounds(const RunConfig& config, std::ostream& log);

// Dispatches by name and maps exceptions to exit codes: InvalidArgument and
// ResourceLimit give 2, NumericFailure and RangeError give 3.
CommandResult run_command(const std::string& name, const RunConfig& config, std::ostream& log);

}  // namespace mdt
