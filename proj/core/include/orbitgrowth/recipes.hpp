#pragma once

// The twelve acceptance criteria as runnable recipes, shared by the acceptance test
// binary and `reproduce`.

#include <cstdint>
#include <string>
#include <vector>

namespace orbitgrowth::recipes {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
  double time_limit = 0;  // seconds; exceeding it fails the criterion
};

struct RunOptions {
  unsigned threads = 1;
  std::uint64_t seed = 0;
};

constexpr int kCriterionCount = 12;

/// Runs criterion `id` (1..12). Library errors are caught and reported as failures.
CriterionResult run_criterion(int id, const RunOptions& options = {});

/// Criteria reproduced by `reproduce --theorem name`: dense, onto, logdelta, loglog,
/// zero, transcendental, section9, plus exact (1-4), squarefree (12) and all.
/// DomainError for an unknown name.
std::vector<int> criteria_for(const std::string& theorem);
std::vector<std::string> theorem_names();

/// "[PASS] 1 exact constant k_{3,7}: k_{3,7} = 269/576", with " (0.001 s)" appended
/// when `with_time` is set.
std::string format(const CriterionResult& result, bool with_time = false);

}  // namespace orbitgrowth::recipes
