#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "analytic/example_id.hpp"

namespace extremal {

enum class ThresholdKind { Analytic, Empirical };

// Everything a run needs, parsed from `key = value` lines or a JSON object.
// Fields left at 0 (q, kn, workers) mean "choose automatically".
struct ExperimentConfig {
  ExampleSpec example;

  std::uint64_t n = 100000;        // threshold scale: n * P(X > u_n) = tau
  std::vector<std::uint64_t> n_grid;  // multi-scale runs; defaults to {n}
  double tau = 1.0;
  std::uint64_t q = 0;             // runs parameter; 0 = example default
  bool select_q = false;           // pick q from the data instead
  bool dprime = false;             // report the pair-correlation diagnostic
  std::uint64_t replicas = 30;
  std::uint64_t seed = 12345;
  std::uint64_t burn_in = 10000;   // map examples: discarded initial steps
  double sample_factor = 100.0;    // orbit length = sample_factor * n / tau
  std::uint64_t kn = 0;            // block count; 0 = ceil(sqrt(n))
  double y_max_factor = 10.0;      // cloud collects heights below this * tau
  std::uint64_t calib_samples = 6000000;  // invariant-density calibration
  ThresholdKind threshold = ThresholdKind::Analytic;
  int workers = 1;
  std::string out = "out";
  std::vector<std::string> emit = {"csv", "json"};  // subset of {csv, json, svg}

  // Number of orbit steps per replica at scale n.
  std::uint64_t series_length(std::uint64_t at_n) const;
  std::uint64_t kn_at(std::uint64_t at_n) const;
  std::vector<std::uint64_t> grid() const;  // n_grid, or {n} if empty
  bool emits(const std::string& what) const;

  void validate() const;  // throws ConfigError on inconsistent settings

  // Parses `key = value` lines ('#' comments) or, when the first non-space
  // character is '{', a JSON object with the same keys.
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  // JSON object round-trippable through parse().
  std::string to_json(int indent = 2) const;
};

}  // namespace extremal
