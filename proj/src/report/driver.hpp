#pragma once

#include <string>
#include <vector>

#include "report/config.hpp"

namespace extremal {

// Output of one run: the JSON report plus the files written under cfg.out
// (paths relative to that directory; empty when emit = none).
struct RunOutput {
  std::string report_json;
  std::vector<std::string> files;
};

// Trajectory export: the raw process values at scale cfg.n.
RunOutput run_simulate(const ExperimentConfig& cfg);

// Replica-averaged cluster estimation at level u_n(tau): run-length theta,
// cluster-size law, the finite-sample mean identity, optional data-driven q
// selection and the pair-correlation diagnostic.
RunOutput run_estimate(const ExperimentConfig& cfg);

// Rescaled exceedance point processes: the two-scale cloud, its projection,
// per-unit-interval counts against the compound Poisson law.
RunOutput run_repp(const ExperimentConfig& cfg);

// Neutral-peak mass diagnostics across the n grid: exceedance mass split and
// the decay of the neutral-side cluster frequency.
RunOutput run_escape_mass(const ExperimentConfig& cfg);

// Closed-form reference table for the configured example; no simulation.
std::string analytic_table_json(const ExperimentConfig& cfg,
                                int kappa_max = 16);

}  // namespace extremal
