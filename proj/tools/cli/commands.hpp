#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include "config.hpp"

namespace nsledger::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitInputError = 2,
  kExitRuntimeError = 3,
};

// Each command writes its artifacts into cfg.output_dir, prints the report to
// `out`, and returns kExitOk only when every verdict passes. Errors propagate
// as exceptions; `guarded` maps them to exit codes.
int run_simulate(const Config& cfg, std::ostream& out);
int run_problem_c(const Config& cfg, std::ostream& out);
int run_verify(const Config& cfg, const std::string& input, std::ostream& out);
int run_converge(const Config& cfg, std::ostream& out);
int run_estimate_c(const Config& cfg, std::ostream& out);

int guarded(const std::function<int()>& command, std::ostream& err);

}  // namespace nsledger::cli
