#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orbitgrowth::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kCacheMiss = 3,
  kBudget = 4,
  kInvariant = 5,
};

/// Runs one subcommand. `args` excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orbitgrowth::cli
