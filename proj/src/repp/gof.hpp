#pragma once

#include <cstdint>
#include <vector>

#include "core/stats.hpp"

namespace extremal {

// Compound Poisson law of the exceedance count in one unit of rescaled time:
// clusters arrive at rate theta * tau and carry iid sizes from size_pmf
// (size_pmf[k-1] = P(size = k), summing to 1 up to truncation).
struct CompoundPoissonSpec {
  double theta = 0.0;
  double tau = 0.0;
  std::vector<double> size_pmf;

  double intensity() const { return theta * tau; }
  // Mean count over one unit of time: intensity times mean cluster size.
  double mean_count() const;
};

// P(count = 0), ..., P(count = max_count) by the Panjer recursion
//   g(0) = exp(-lambda),  g(n) = (lambda / n) sum_{k=1..n} k f(k) g(n-k).
std::vector<double> compound_count_pmf(const CompoundPoissonSpec& spec,
                                       std::size_t max_count);

// Chi-squared test of observed per-interval counts against the spec. Counts
// are raw samples (one total per interval), histogrammed internally.
Chi2Result gof_compound_counts(const std::vector<std::uint64_t>& counts,
                               const CompoundPoissonSpec& spec);

// Chi-squared test of observed cluster sizes (values >= 1) against a size
// law given as pmf[k-1] = P(size = k).
Chi2Result gof_cluster_sizes(const std::vector<std::uint64_t>& sizes,
                             const std::vector<double>& size_pmf);

}  // namespace extremal
