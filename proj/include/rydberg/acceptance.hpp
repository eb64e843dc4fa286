#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rydberg {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  // Sub-checks run, and the names of those that failed.
  int checks = 0;
  std::vector<std::string> failures;
  // Failed sub-checks that no correct implementation can meet, with the
  // reason. They keep the criterion from passing but are reported apart
  // from genuine failures.
  std::vector<std::string> unattainable;
  std::string summary;
  double seconds = 0;
};

struct AcceptanceOptions {
  // Criteria to run (1..8); empty means all.
  std::vector<int> only;
  // Symbolic order cap (in t^(2j)) for the ring oracle comparison.
  int oracle_jmax = 12;
};

// Runs the acceptance criteria in order, printing one line per criterion to
// `log` as each finishes (if non-null).
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {}, std::ostream* log = nullptr);

// True when every failure is a documented unattainable sub-check.
bool only_unattainable_failures(const std::vector<CriterionResult>& results);

// "PASS [3] oracle equivalence (96 checks, 1.2 s): ..." with failing sub-checks listed.
std::string format_result(const CriterionResult& result);

}  // namespace rydberg
