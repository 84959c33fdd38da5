#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace extremal {

struct CriterionResult {
  std::string id;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values with their bounds
  double seconds = 0.0;
};

struct AcceptanceOptions {
  bool full = true;  // full gate sizes; false = quick selftest sizes
  std::uint64_t seed = 20260815;
  int workers = 1;
  // Deliberately corrupts one reference value before checking; used by the
  // selftest to prove the gate actually detects a wrong oracle.
  bool mutate_oracle = false;
};

// Runs all eleven criteria in order, streaming one [PASS]/[FAIL] line per
// criterion to `log` (when non-null) as it completes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            std::ostream* log);

}  // namespace extremal
