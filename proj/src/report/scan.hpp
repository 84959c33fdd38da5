#pragma once

#include <cstdint>
#include <vector>

#include "clustering/binary_series.hpp"
#include "core/rng.hpp"
#include "report/examples.hpp"

namespace extremal {

// One collected position: frequency height y = n * P(X > value), so the
// position exceeds u_n(tau') exactly when y < tau'. Source tells the peak
// (0 = first / neutral, 1 = second).
struct Hit {
  std::uint64_t pos = 0;
  double height = 0.0;
  std::uint8_t source = 0;
};

struct ScanResult {
  std::uint64_t length = 0;
  std::vector<Hit> hits;  // position order
};

// Scans one fresh replica orbit of `length` steps at scale n, collecting all
// positions of height below y_level. The per-example loops compare raw
// distances against precomputed windows; no transcendentals on the fast path.
ScanResult scan_example(const ExampleContext& ctx, std::uint64_t n,
                        double y_level, std::uint64_t length, Rng& rng);

// Positions with height < tau, as a sparse 0/1 series of the full length.
BinarySeries hits_to_series(const ScanResult& scan, double tau);

// Dense process values for trajectory output: the moving maximum itself, or
// the orbit of the underlying map.
std::vector<double> generate_values(const ExampleContext& ctx,
                                    std::uint64_t length, Rng& rng);

}  // namespace extremal
