#pragma once

#include <cstdint>
#include <map>

#include "analytic/oracle.hpp"
#include "observables/observable.hpp"
#include "observables/threshold.hpp"
#include "report/config.hpp"

namespace extremal {

// Closed-form reference values plus the calibrated constants the scanners
// need. Built once per run and shared read-only by all replica workers.
struct ExampleContext {
  ExperimentConfig cfg;
  AnalyticSummary summary;
  bool is_lsv = false;

  // Intermittent-map examples only.
  double c1 = 0.0;     // mu([0,s)) ~ c1 s^{1-alpha} (1 + b1 s^alpha) at 0
  double b1 = 0.0;     // subleading tail coefficient
  double h2 = 0.0;     // invariant density at the second peak
  double zeta2 = 0.0;  // second peak location
  double density_exponent = 0.0;  // free-exponent fit, diagnostic only

  // Thresholds per scale, resolved at build time (analytic closed form, or
  // the empirical quantile of a calibration stream).
  std::map<std::uint64_t, ThresholdSchedule> thresholds;

  // Runs parameter: cfg.q if set, otherwise the example default.
  std::uint64_t resolve_q() const { return cfg.q > 0 ? cfg.q : summary.q; }

  const ThresholdSchedule& threshold_at(std::uint64_t n) const;
  ObservableSpec observable() const;
};

ExampleContext build_example_context(const ExperimentConfig& cfg);

// Raw-space cut parameters for collecting all positions of frequency height
// below y_level at scale n (exceedances of u_n(y_level)).
struct ScanWindows {
  double u = 0.0;      // moving maximum: value threshold
  double r1 = 0.0;     // radius around the first finite center
  double r2 = 0.0;     // radius around the second finite center
  double y_cut = 0.0;  // neutral-side cut x < y_cut (intermittent examples)
};

ScanWindows scan_windows(const ExampleContext& ctx, std::uint64_t n,
                         double y_level);

}  // namespace extremal
