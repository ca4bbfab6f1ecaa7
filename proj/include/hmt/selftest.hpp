// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace hmt {

struct CheckResult {
  std::string id;
  bool pass = false;
  bool informational = false;  // measured and reported, no pass threshold
  std::string detail;          // measured values and tolerances
};

// Runs every oracle comparison and invariant check; the montecarlo checks
// honor `workers`. Informational entries never fail the run.
std::vector<CheckResult> run_selftest(int workers = 1);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace hmt
