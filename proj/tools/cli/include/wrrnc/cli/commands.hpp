#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wrrnc::cli {

// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitDeadline = 1,   // a deadline is missed or no feasible plan exists
  kExitUsage = 2,      // bad flags, config syntax or validation error
  kExitUnsound = 3,    // a simulated delay exceeded its analytical bound
  kExitSaturated = 4,  // analysis or simulation found a saturated port
};

// Runs one command line (without the program name). Reports go to `out`,
// diagnostics and log lines to `err`. Log level comes from WRRNC_LOG.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wrrnc::cli
