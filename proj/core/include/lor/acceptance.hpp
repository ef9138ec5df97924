#pragma once

#include <string>
#include <vector>

namespace lor::accept {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 9;

// Runs one acceptance criterion (1-based). Every tolerance is pinned in the
// implementation; results are deterministic for the built-in seeds.
CriterionResult run_criterion(int id);

// Runs all criteria in order.
std::vector<CriterionResult> run_all();

// "[PASS] 3 cycle-statistics: ..." one-line rendering.
std::string format_result(const CriterionResult& result);

}  // namespace lor::accept
