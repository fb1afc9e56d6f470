#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace marchuk::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInfeasible = 2,
  kExitViolation = 3,
};

/// Runs the command line `args` (without the program name). Human-readable
/// messages go to `err`; JSON results of certify/check-basin also go to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace marchuk::cli
