#include "dynamics/maps.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace extremal {

LsvMap::LsvMap(double a) : alpha(a), c2(std::pow(2.0, a)) {
  if (!(a > 0.0) || !(a < 1.0))
    throw ConfigError("LsvMap: alpha must lie in (0,1)");
}

double LsvMap::derivative(double x) const {
  if (x < 0.5) return 1.0 + c2 * (1.0 + alpha) * std::pow(x, alpha);
  return 2.0;
}

double lsv_step(double alpha, double x) { return LsvMap(alpha).step(x); }

double lsv_preimage_left(double alpha, double y) {
  if (!(y >= 0.0) || !(y <= 1.0))
    throw ConfigError("lsv_preimage_left: y must lie in [0,1]");
  const LsvMap map(alpha);
  if (y == 0.0) return 0.0;
  double lo = 0.0, hi = 0.5;
  for (int i = 0; i < 64; ++i) {
    const double mid = 0.5 * (lo + hi);
    (map.step(mid) < y ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  // Newton polish; the branch is smooth and expanding away from 0.
  for (int i = 0; i < 3; ++i) {
    const double f = x * (1.0 + map.c2 * std::pow(x, alpha)) - y;
    const double d = 1.0 + map.c2 * (1.0 + alpha) * std::pow(x, alpha);
    const double next = x - f / d;
    if (next > 0.0 && next < 0.5) x = next;
  }
  return x;
}

double lsv_sample_invariant(const LsvMap& map, Rng& rng,
                            std::uint64_t burn_in) {
  double x = rng.uniform01();
  for (std::uint64_t i = 0; i < burn_in; ++i) x = map.step(x);
  return x;
}

LsvOrbit::LsvOrbit(const LsvMap& map, Rng& rng, std::uint64_t burn_in)
    : map_(map), rng_(&rng), x_(rng.uniform01()) {
  for (std::uint64_t i = 0; i < burn_in; ++i) step();
}

DoublingState DoublingState::from_unit(double x0, Rng reservoir) {
  if (!(x0 >= 0.0) || !(x0 >= 0.0 && x0 < 1.0))
    throw ConfigError("DoublingState: x0 must lie in [0,1)");
  const double scaled = std::floor(x0 * 0x1.0p64);
  const std::uint64_t frac =
      scaled >= 0x1.0p64 ? ~0ULL : std::uint64_t(scaled);
  return DoublingState(frac, reservoir);
}

}  // namespace extremal
