#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcosym/cli/config.hpp"
#include "qcosym/cli/csv.hpp"

namespace qcosym::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,     // bad config or violated precondition
  kExitNullcline = 2,  // S_x reconstruction hit the fast nullcline
  kExitThreshold = 3,  // ran to completion but a configured threshold was exceeded
  kExitFailure = 4,    // integrator or other numerical failure
};

struct RunOptions {
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct CommandResult {
  int exit_code = kExitOk;
  CsvReport report;     // meaningful for kExitOk and kExitThreshold
  std::string message;  // diagnostics for stderr
};

const std::vector<std::string>& command_names();

/// Runs one command on a parsed config. Never throws for library or config
/// errors; they are mapped onto exit codes.
CommandResult run_command(const std::string& name, const json& config, const RunOptions& opt);

CsvReport cmd_validate_hj(const json& config, const RunOptions& opt, int& exit_code);
CsvReport cmd_simulate(const json& config, const RunOptions& opt, int& exit_code);
CsvReport cmd_reduce(const json& config, const RunOptions& opt, int& exit_code);
CsvReport cmd_linearize(const json& config, const RunOptions& opt, int& exit_code);
CsvReport cmd_characteristics(const json& config, const RunOptions& opt, int& exit_code);
CsvReport cmd_check_structure(const json& config, const RunOptions& opt, int& exit_code);

}  // namespace qcosym::cli
