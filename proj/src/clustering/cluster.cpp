#include "clustering/cluster.hpp"

#include <algorithm>

#include "core/errors.hpp"
#include "core/stats.hpp"

namespace extremal {

std::vector<Cluster> runs_decluster(const BinarySeries& b, std::uint64_t q) {
  if (q == 0) throw ConfigError("runs_decluster: q must be >= 1");
  std::vector<Cluster> out;
  const auto& p = b.ones;
  std::size_t i = 0;
  while (i < p.size()) {
    std::size_t j = i;
    while (j + 1 < p.size() && p[j + 1] - p[j] <= q) ++j;
    Cluster c;
    c.first = p[i];
    c.last = p[j];
    c.size = j - i + 1;
    // The terminating gap is in-series automatically when another exceedance
    // follows; only the final cluster can run into the series end.
    c.truncated = (j + 1 == p.size()) && (p[j] + q >= b.length);
    out.push_back(c);
    i = j + 1;
  }
  return out;
}

std::vector<Cluster> blocks_decluster(const BinarySeries& b, std::uint64_t k_n) {
  if (k_n == 0) throw ConfigError("blocks_decluster: k_n must be >= 1");
  const std::uint64_t block = b.length / k_n;
  if (block == 0)
    throw ConfigError("blocks_decluster: more blocks than observations");
  std::vector<Cluster> out;
  for (std::size_t i = 0; i < b.ones.size();) {
    const std::uint64_t id = std::min(b.ones[i] / block, k_n);
    Cluster c;
    c.first = b.ones[i];
    c.size = 0;
    while (i < b.ones.size() && std::min(b.ones[i] / block, k_n) == id) {
      c.last = b.ones[i];
      ++c.size;
      ++i;
    }
    out.push_back(c);
  }
  return out;
}

QClassification count_Q(const BinarySeries& b, std::uint64_t q) {
  if (q == 0) throw ConfigError("count_Q: q must be >= 1");
  QClassification r;
  const auto& p = b.ones;
  r.kappa.assign(p.size(), -1);
  // Backward pass: a position either terminates a chain (gap > q observed in
  // series) or inherits its successor's count plus one.
  for (std::size_t ii = p.size(); ii-- > 0;) {
    if (ii + 1 == p.size()) {
      if (p[ii] + q < b.length) r.kappa[ii] = 0;  // q zeros fit before the end
    } else if (p[ii + 1] - p[ii] > q) {
      r.kappa[ii] = 0;
    } else if (r.kappa[ii + 1] >= 0) {
      r.kappa[ii] = r.kappa[ii + 1] + 1;
    }
  }
  for (auto k : r.kappa) {
    if (k < 0) {
      ++r.censored;
      continue;
    }
    ++r.classified;
    if (std::uint64_t(k) >= r.counts.size()) r.counts.resize(k + 1, 0);
    ++r.counts[std::uint64_t(k)];
  }
  return r;
}

ClusterStats cluster_stats(const BinarySeries& b, std::uint64_t q) {
  ClusterStats s;
  s.length = b.length;
  s.q = q;
  s.n_exceed = b.ones.size();

  const QClassification cls = count_Q(b, q);
  s.censored = cls.censored;
  s.classified = cls.classified;
  s.q_counts = cls.counts;

  const auto clusters = runs_decluster(b, q);
  for (const auto& c : clusters) {
    s.longest_cluster = std::max(s.longest_cluster, c.size);
    if (c.truncated) continue;
    ++s.complete_clusters;
    s.exceed_in_complete += c.size;
    if (c.size > s.h_counts.size()) s.h_counts.resize(c.size, 0);
    ++s.h_counts[c.size - 1];
  }

  if (s.classified > 0)
    s.theta_hat = double(cls.count(0)) / double(s.classified);
  if (s.complete_clusters > 0) {
    s.pi_hat.resize(s.h_counts.size());
    for (std::size_t k = 0; k < s.h_counts.size(); ++k)
      s.pi_hat[k] = double(s.h_counts[k]) / double(s.complete_clusters);
  }
  return s;
}

double empirical_theta(const BinarySeries& b, std::uint64_t q) {
  const QClassification cls = count_Q(b, q);
  if (cls.classified == 0)
    throw InsufficientDataError("empirical_theta: no classified exceedances");
  return double(cls.count(0)) / double(cls.classified);
}

std::vector<double> empirical_pi(const BinarySeries& b, std::uint64_t q) {
  const auto stats = cluster_stats(b, q);
  if (stats.complete_clusters == 0)
    throw InsufficientDataError("empirical_pi: no complete clusters");
  return stats.pi_hat;
}

MeanIdentity mean_identity_check(const BinarySeries& b, std::uint64_t q) {
  const auto stats = cluster_stats(b, q);
  MeanIdentity m;
  m.complete_clusters = stats.complete_clusters;
  m.exceed_in_complete = stats.exceed_in_complete;
  m.q_zero_count = stats.q_counts.empty() ? 0 : stats.q_counts[0];
  m.classified = stats.classified;
  if (m.complete_clusters == 0 || m.q_zero_count == 0)
    throw InsufficientDataError("mean_identity_check: no complete clusters");
  m.mean_cluster_size =
      double(m.exceed_in_complete) / double(m.complete_clusters);
  m.inv_theta_hat = double(m.classified) / double(m.q_zero_count);
  // Cross-multiplied integer identity; both sides are ratios of these counts.
  m.exact = (unsigned __int128)(m.exceed_in_complete) * m.q_zero_count ==
            (unsigned __int128)(m.classified) * m.complete_clusters;
  m.discrepancy = m.exact ? 0.0 : m.mean_cluster_size - m.inv_theta_hat;
  return m;
}

std::uint64_t first_return_time(const BinarySeries& b,
                                const std::vector<std::uint64_t>& positions) {
  std::uint64_t best = kNoReturn;
  for (auto p : positions) {
    auto it = std::upper_bound(b.ones.begin(), b.ones.end(), p);
    if (it != b.ones.end()) best = std::min(best, *it - p);
  }
  return best;
}

namespace {

std::uint64_t pooled_return_time(const std::vector<BinarySeries>& reps,
                                 std::uint64_t q) {
  std::uint64_t best = kNoReturn;
  for (const auto& b : reps) {
    const QClassification cls = count_Q(b, q);
    std::vector<std::uint64_t> ends;
    for (std::size_t i = 0; i < b.ones.size(); ++i)
      if (cls.kappa[i] == 0) ends.push_back(b.ones[i]);
    best = std::min(best, first_return_time(b, ends));
  }
  return best;
}

}  // namespace

SelectQResult select_q(
    const std::function<std::vector<BinarySeries>(std::uint64_t)>& series_at,
    const std::vector<std::uint64_t>& n_grid, std::uint64_t q_max,
    double growth_factor) {
  if (n_grid.size() < 2)
    throw ConfigError("select_q: need at least two n values");
  if (q_max == 0) throw ConfigError("select_q: q_max must be >= 1");

  std::vector<std::vector<BinarySeries>> reps;
  std::uint64_t total_ones = 0;
  reps.reserve(n_grid.size());
  for (auto n : n_grid) {
    reps.push_back(series_at(n));
    for (const auto& b : reps.back()) total_ones += b.count_ones();
  }
  if (total_ones == 0)
    throw InsufficientDataError("select_q: no exceedances in any replica");

  SelectQResult r;
  r.n_grid = n_grid;
  r.return_time.assign(q_max, std::vector<std::uint64_t>(n_grid.size()));
  bool any_decidable = false;
  for (std::uint64_t q = 1; q <= q_max; ++q) {
    for (std::size_t ni = 0; ni < n_grid.size(); ++ni)
      r.return_time[q - 1][ni] = pooled_return_time(reps[ni], q);
    const std::uint64_t r_small = r.return_time[q - 1].front();
    const std::uint64_t r_large = r.return_time[q - 1].back();
    if (r_small != kNoReturn) any_decidable = true;
    const bool grows =
        r_large == kNoReturn ||
        (r_large > q_max &&
         double(r_large) >= growth_factor * double(r_small));
    if (grows && r.q == 0) r.q = q;
  }
  if (!any_decidable)
    throw InsufficientDataError(
        "select_q: return times undefined at the smallest n (single cluster?)");
  if (r.q == 0)
    throw InsufficientDataError(
        "select_q: no q up to q_max shows growing return times");
  return r;
}

DPrimeResult dprime_diagnostic(const BinarySeries& b, std::uint64_t q,
                               std::uint64_t n, std::uint64_t k_n) {
  if (k_n == 0 || n / k_n < q + 2)
    throw ConfigError("dprime_diagnostic: window floor(n/k_n) too small");
  DPrimeResult r;
  r.window = n / k_n;
  if (b.length <= r.window)
    throw ConfigError("dprime_diagnostic: series shorter than window");
  const std::uint64_t starts = b.length - r.window;

  const QClassification cls = count_Q(b, q);
  const auto& p = b.ones;

  // Batch the eligible start range for a dependence-honest standard error.
  const std::size_t n_batches = 20;
  const std::uint64_t batch_len = starts / n_batches;
  std::vector<double> batch_est;
  std::vector<std::uint64_t> batch_pairs(n_batches, 0);

  for (std::size_t i = 0; i < p.size(); ++i) {
    if (cls.kappa[i] != 0) continue;
    const std::uint64_t pos = p[i];
    if (pos >= starts) continue;
    // Later exceedances at lags q+1 .. window-1.
    auto lo = std::upper_bound(p.begin(), p.end(), pos + q);
    auto hi = std::upper_bound(p.begin(), p.end(), pos + r.window - 1);
    const std::uint64_t cnt = std::uint64_t(hi - lo);
    r.pairs += cnt;
    if (batch_len > 0)
      batch_pairs[std::min<std::uint64_t>(pos / batch_len, n_batches - 1)] +=
          cnt;
  }
  r.estimate = double(n) * double(r.pairs) / double(starts);
  if (batch_len > 0) {
    for (std::size_t bi = 0; bi < n_batches; ++bi)
      batch_est.push_back(double(n) * double(batch_pairs[bi]) /
                          double(batch_len));
    const auto ms = mean_se(batch_est);
    r.se = ms.se;
  }
  return r;
}

}  // namespace extremal
