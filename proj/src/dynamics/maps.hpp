#pragma once

#include <cmath>
#include <cstdint>

#include "core/rng.hpp"

namespace extremal {

// Largest alpha for which the intermittent-map experiments are run; above it
// the short-range dependence conditions the estimators rely on are not known
// to hold. Equals sqrt(5) - 2.
inline constexpr double kLsvAlphaMax = 0.23606797749978969;

// Intermittent interval map with a neutral fixed point at 0:
//   T(x) = x (1 + 2^alpha x^alpha)  on [0, 1/2)
//   T(x) = 2x - 1                   on [1/2, 1]
struct LsvMap {
  double alpha;
  double c2;  // 2^alpha, cached for the hot loop

  explicit LsvMap(double a);
  double step(double x) const {
    if (x < 0.5) return x * (1.0 + c2 * std::pow(x, alpha));
    return 2.0 * x - 1.0;
  }
  // Derivative of the applicable branch.
  double derivative(double x) const;
};

double lsv_step(double alpha, double x);

// Left-branch inverse: the unique x in [0, 1/2] with x (1 + 2^alpha x^alpha)
// = y. Bisection refined by Newton; residual stays below 1e-14.
double lsv_preimage_left(double alpha, double y);

// Uniform start pushed through burn_in iterations, as a stand-in sample from
// the invariant density.
double lsv_sample_invariant(const LsvMap& map, Rng& rng, std::uint64_t burn_in);

// Relative scale of the orbit dither below: far above the 2^-52 rounding
// grid, far below the narrowest window the estimators ever read (about
// 1e-10 around a periodic center), so no measured quantity moves.
inline constexpr double kLsvDitherScale = 0x1p-40;

// Dithered orbit of the intermittent map. Iterating the rounded map alone
// is a random function on the ~2^53 representable points, so the orbit
// falls onto a cycle of roughly sqrt(2^53) ~ 1e8 states after about as many
// steps; from then on a window of measure below ~1e-7 holds at most a
// couple of distinct orbit points, and deep exceedance statistics turn into
// point masses (every replica finds the same cycle). The per-step
// multiplicative dither keeps the chain aperiodic; being relative, it
// preserves the distribution of entry depths near the neutral point at
// every magnitude. Draws come from the caller's stream, so replicas stay
// independent and runs reproduce byte for byte.
class LsvOrbit {
 public:
  // Uniform start pushed through burn_in dithered steps.
  LsvOrbit(const LsvMap& map, Rng& rng, std::uint64_t burn_in);

  double value() const { return x_; }

  void step() {
    double y = map_.step(x_);
    y *= 1.0 + kLsvDitherScale * (2.0 * rng_->uniform01() - 1.0);
    if (y >= 1.0) y = 1.0 - (y - 1.0) - 0x1p-53;  // fold strictly inside
    if (y <= 0.0) y = 0x1p-53;  // 0 is a fixed point; never park on it
    x_ = y;
  }

 private:
  LsvMap map_;
  Rng* rng_;
  double x_;
};

// Exact doubling map 2x mod 1. A 64-bit window slides over an infinite random
// binary expansion: one step shifts the window and appends a fresh bit, so no
// floating-point collapse onto the dyadics occurs and the value distribution
// stays uniform forever.
class DoublingState {
 public:
  DoublingState(std::uint64_t frac, Rng reservoir)
      : frac_(frac), rng_(reservoir) {}

  static DoublingState from_unit(double x0, Rng reservoir);

  void step() { frac_ = (frac_ << 1) | std::uint64_t(rng_.next_bit()); }

  // Nearest double to the current point of [0,1).
  double value() const { return double(frac_) * 0x1.0p-64; }
  std::uint64_t frac() const { return frac_; }

 private:
  std::uint64_t frac_;
  Rng rng_;
};

}  // namespace extremal
