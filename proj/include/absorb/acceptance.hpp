#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "absorb/config.hpp"

namespace absorb {

/// One measured quantity of a criterion. `pass` compares `observed` with
/// `target` under `tolerance` in the way `check` describes. Informational rows
/// never affect the verdict.
struct CriterionRow {
  std::string id;
  std::string check;
  double observed = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  double std_error = 0.0;  ///< NaN when the row is not a Monte Carlo estimate
  bool pass = false;
  bool informational = false;
  std::string note;
};

struct CriterionOutcome {
  std::string id;
  std::string title;
  bool pass = false;
  double runtime_s = 0.0;
  double budget_s = 0.0;
  std::string error;  ///< exception text when the criterion aborted
};

struct TestReport {
  std::uint64_t seed = 0;
  std::vector<CriterionOutcome> criteria;
  std::vector<CriterionRow> rows;

  bool all_passed() const;
};

/// A1 … A12.
std::vector<std::string> known_criteria();

/// Runs the listed criteria in order. A criterion passes when every
/// non-informational row passes and it finished within its runtime budget.
/// Failures and exceptions are recorded; the batch always runs to the end.
/// `on_done` is called after each criterion (for progress output).
TestReport run_acceptance(const std::vector<std::string>& ids, std::uint64_t seed,
                          const AcceptanceConfig& cfg = {},
                          const std::function<void(const CriterionOutcome&)>& on_done = {});

}  // namespace absorb
