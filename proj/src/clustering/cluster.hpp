#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "clustering/binary_series.hpp"

namespace extremal {

// A run-declustered cluster: exceedances separated by gaps of at most q-1
// zeros. `truncated` marks a cluster cut off by the series end before q clear
// steps could be observed; its size is a lower bound and it is excluded from
// size-distribution estimates.
struct Cluster {
  std::uint64_t first = 0;
  std::uint64_t last = 0;
  std::uint64_t size = 0;
  bool truncated = false;
};

std::vector<Cluster> runs_decluster(const BinarySeries& b, std::uint64_t q);

// Fixed blocks of length floor(length / k_n); a trailing partial block is kept
// as block k_n. Each block with at least one exceedance yields one cluster.
std::vector<Cluster> blocks_decluster(const BinarySeries& b, std::uint64_t k_n);

// Forward classification of each exceedance position: kappa[i] counts how many
// further exceedances follow ones[i], each within q steps of the previous one,
// before a gap of at least q zeros. kappa[i] = -1 when the series ends before
// the terminating gap is observed (censored). A position with kappa == k is
// exactly a position whose k-step "still clustered" chain ends there.
struct QClassification {
  std::vector<std::int64_t> kappa;      // parallel to b.ones
  std::uint64_t censored = 0;
  std::uint64_t classified = 0;
  std::vector<std::uint64_t> counts;    // counts[k] = #positions with kappa == k

  std::uint64_t count(std::uint64_t k) const {
    return k < counts.size() ? counts[k] : 0;
  }
};

QClassification count_Q(const BinarySeries& b, std::uint64_t q);

// Aggregate cluster statistics for one series at one threshold. The two
// routes (cluster partition and per-position classification) are computed
// independently and must tally: counts[k] equals the number of complete
// clusters of size >= k+1.
struct ClusterStats {
  std::uint64_t length = 0;
  std::uint64_t q = 0;
  std::uint64_t n_exceed = 0;            // all 1s
  std::uint64_t censored = 0;            // positions without a decided kappa
  std::uint64_t classified = 0;          // n_exceed - censored
  std::uint64_t complete_clusters = 0;
  std::uint64_t exceed_in_complete = 0;  // total size over complete clusters
  std::uint64_t longest_cluster = 0;     // includes truncated clusters
  std::vector<std::uint64_t> q_counts;   // q_counts[k] = #positions kappa == k
  std::vector<std::uint64_t> h_counts;   // h_counts[k-1] = #complete clusters of size k
  double theta_hat = 0.0;                // q_counts[0] / classified
  std::vector<double> pi_hat;            // pi_hat[k-1] = fraction of clusters of size k
};

ClusterStats cluster_stats(const BinarySeries& b, std::uint64_t q);

double empirical_theta(const BinarySeries& b, std::uint64_t q);
std::vector<double> empirical_pi(const BinarySeries& b, std::uint64_t q);

// Both sides of the finite-sample identity mean_cluster_size * theta_hat = 1.
// Because each complete cluster contributes exactly one kappa == 0 position
// and its size in classified positions, the two sides are the same integer
// ratio; `exact` reports the integer cross-check.
struct MeanIdentity {
  double mean_cluster_size = 0.0;
  double inv_theta_hat = 0.0;
  double discrepancy = 0.0;
  bool exact = false;
  std::uint64_t complete_clusters = 0;
  std::uint64_t exceed_in_complete = 0;
  std::uint64_t q_zero_count = 0;
  std::uint64_t classified = 0;
};

MeanIdentity mean_identity_check(const BinarySeries& b, std::uint64_t q);

inline constexpr std::uint64_t kNoReturn =
    std::numeric_limits<std::uint64_t>::max();

// Minimum gap from a marked position to the next exceedance of b. Positions
// must be a subset of b.ones. Returns kNoReturn if no marked position has a
// successor.
std::uint64_t first_return_time(const BinarySeries& b,
                                const std::vector<std::uint64_t>& positions);

// Run-length selection: smallest q whose end-of-cluster positions have a
// minimum return time that grows across the n grid (R(n_max) >= growth *
// R(n_min) and R(n_max) > q_max). `series_at(n)` supplies replicas binarized
// at the level u_n; the minimum is pooled over replicas.
struct SelectQResult {
  std::uint64_t q = 0;
  std::vector<std::uint64_t> n_grid;
  // return_time[qi][ni] = pooled min return time for candidate q = qi+1.
  std::vector<std::vector<std::uint64_t>> return_time;
};

SelectQResult select_q(
    const std::function<std::vector<BinarySeries>(std::uint64_t)>& series_at,
    const std::vector<std::uint64_t>& n_grid, std::uint64_t q_max,
    double growth_factor = 2.0);

// Monte Carlo check of the short-range dependence sum
//   n * sum_{j=q+1}^{floor(n/k_n)-1} P(kappa==0 at 0, exceedance at j),
// estimated by counting (end-of-cluster, later exceedance) pairs within the
// window. Standard error from contiguous batches.
struct DPrimeResult {
  double estimate = 0.0;
  double se = 0.0;
  std::uint64_t pairs = 0;
  std::uint64_t window = 0;
};

DPrimeResult dprime_diagnostic(const BinarySeries& b, std::uint64_t q,
                               std::uint64_t n, std::uint64_t k_n);

}  // namespace extremal
