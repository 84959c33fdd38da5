#include "repp/gof.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace extremal {

double CompoundPoissonSpec::mean_count() const {
  double mean_size = 0.0;
  for (std::size_t k = 0; k < size_pmf.size(); ++k)
    mean_size += double(k + 1) * size_pmf[k];
  return intensity() * mean_size;
}

std::vector<double> compound_count_pmf(const CompoundPoissonSpec& spec,
                                       std::size_t max_count) {
  if (!(spec.theta > 0.0) || !(spec.tau > 0.0))
    throw ConfigError("compound_count_pmf: rates must be positive");
  if (spec.size_pmf.empty())
    throw ConfigError("compound_count_pmf: empty size law");
  const double lambda = spec.intensity();
  std::vector<double> g(max_count + 1, 0.0);
  g[0] = std::exp(-lambda);
  for (std::size_t n = 1; n <= max_count; ++n) {
    double acc = 0.0;
    const std::size_t k_hi = std::min(n, spec.size_pmf.size());
    for (std::size_t k = 1; k <= k_hi; ++k)
      acc += double(k) * spec.size_pmf[k - 1] * g[n - k];
    g[n] = lambda / double(n) * acc;
  }
  return g;
}

namespace {

std::vector<std::uint64_t> histogram(const std::vector<std::uint64_t>& xs,
                                     std::uint64_t first) {
  std::uint64_t hi = first;
  for (auto x : xs) hi = std::max(hi, x);
  std::vector<std::uint64_t> h(hi - first + 1, 0);
  for (auto x : xs) {
    if (x < first) throw ConfigError("histogram: value below support");
    ++h[x - first];
  }
  return h;
}

}  // namespace

Chi2Result gof_compound_counts(const std::vector<std::uint64_t>& counts,
                               const CompoundPoissonSpec& spec) {
  if (counts.size() < 100)
    throw InsufficientDataError(
        "gof_compound_counts: need at least 100 interval counts, got " +
        std::to_string(counts.size()));
  const auto h = histogram(counts, 0);
  const auto pmf = compound_count_pmf(spec, h.size() - 1);
  // Mass beyond the histogram range lands in the pooled tail cell.
  return chi2_vs_pmf(
      h, [&pmf](std::uint64_t v) { return v < pmf.size() ? pmf[v] : 0.0; }, 0);
}

Chi2Result gof_cluster_sizes(const std::vector<std::uint64_t>& sizes,
                             const std::vector<double>& size_pmf) {
  if (sizes.empty())
    throw InsufficientDataError("gof_cluster_sizes: no samples");
  return chi2_vs_pmf(
      histogram(sizes, 1),
      [&size_pmf](std::uint64_t k) {
        return k >= 1 && k <= size_pmf.size() ? size_pmf[k - 1] : 0.0;
      },
      1);
}

}  // namespace extremal
