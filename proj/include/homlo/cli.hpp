#pragma once
#include <ostream>

namespace homlo::cli {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 2,
  kDataError = 3,
  kNumericalError = 4,
};

/// Entry point of the `homlo` tool: subcommands simulate, analyze, overlap and fit.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace homlo::cli
