#pragma once

#include <cstdint>
#include <vector>

#include "clustering/binary_series.hpp"
#include "core/rng.hpp"

namespace extremal {

// A mark of the two-scale exceedance cloud: rescaled time t, height y on the
// frequency scale (smaller = more extreme), and the peak the mark belongs to
// (0 = first peak or neutral point, 1 = second peak). Single-peak processes
// use source 0 throughout.
struct MarkedPoint {
  double t = 0.0;
  double y = 0.0;
  std::uint8_t source = 0;
};

struct MarkedPointSet2D {
  double t_max = 1.0;
  double y_max = 0.0;
  std::vector<MarkedPoint> points;
};

// Atom of a one-dimensional counting process: time and integer mass.
struct ProcessPoint1D {
  double t = 0.0;
  std::uint64_t multiplicity = 0;
};

struct PointProcess1D {
  double t_max = 1.0;
  std::vector<ProcessPoint1D> points;

  std::uint64_t total_mass() const {
    std::uint64_t m = 0;
    for (const auto& p : points) m += p.multiplicity;
    return m;
  }
};

// Exceedance positions of a binary series placed at times i/n, unit mass each.
PointProcess1D rescale_exceedances(const BinarySeries& b, std::uint64_t n);

// Keep the marks strictly below level tau and project them onto the time
// axis, merging marks that share a time into one atom with that multiplicity.
// The input must be sorted by t (position order); ties must be adjacent.
PointProcess1D project_below(const MarkedPointSet2D& cloud, double tau);

// Position-exact agreement between a projected cloud at scale n and a binary
// series: atom times must recover the exceedance set via round(t * n), with
// multiplicity one at each position.
bool projection_matches(const PointProcess1D& projected, const BinarySeries& b,
                        std::uint64_t n);

// Cluster-arrival form of the compound Poisson limit on [0, t_max]: cluster
// times arrive at rate theta * tau, each carrying an iid size drawn from
// size_pmf (size_pmf[k-1] = P(size = k)).
PointProcess1D simulate_compound_poisson(double theta, double tau,
                                         const std::vector<double>& size_pmf,
                                         double t_max, Rng& rng);

// Limit cloud around a repelling center with orbit derivative gamma. Cluster
// base marks form a Poisson process of intensity theta dt dy; the base at
// height y carries the ladder y, gamma y, gamma^2 y, ... truncated at y_max.
// Unit height strips are simulated from independent derived substreams so
// that raising y_max only appends marks, never perturbs existing ones.
MarkedPointSet2D simulate_limit_cloud_periodic(double theta, double gamma,
                                               double t_max, double y_max,
                                               std::uint64_t master_seed,
                                               std::uint64_t stream);

// Limit cloud when every cluster is a single mark: homogeneous Poisson with
// intensity rate dt dy on [0, t_max] x [0, y_max].
MarkedPointSet2D simulate_limit_cloud_poisson(double rate, double t_max,
                                              double y_max, Rng& rng);

}  // namespace extremal
