// Acceptance gate: runs the twelve criteria (or the ones named by --criterion) and
// prints one PASS/FAIL line each. Exit status 0 iff every selected criterion passes.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "orbitgrowth/recipes.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      ids.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (ids.empty()) {
    for (int id = 1; id <= orbitgrowth::recipes::kCriterionCount; ++id) ids.push_back(id);
  }
  int failed = 0;
  for (const int id : ids) {
    const auto result = orbitgrowth::recipes::run_criterion(id);
    std::cout << orbitgrowth::recipes::format(result, true) << std::endl;
    failed += !result.passed;
  }
  std::cout << (static_cast<int>(ids.size()) - failed) << "/" << ids.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
