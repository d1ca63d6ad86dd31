#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace rfeh::app {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Criterion {
  int id;
  std::string name;
};

const std::vector<Criterion>& acceptance_criteria();

/// Runs the selected criteria (all when `only` is empty), printing one
/// PASS/FAIL line per criterion to `log` as each finishes.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& only, std::ostream* log);

nlohmann::json acceptance_report(const std::vector<CriterionResult>& results);

}  // namespace rfeh::app
