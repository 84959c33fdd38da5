#pragma once

#include <cstdint>
#include <vector>

#include "core/rng.hpp"

namespace extremal {

// Moving maximum of uniforms: X_i = max(Y_{i-2}, Y_i) with Y_{-2}, Y_{-1}, ...
// iid Uniform(0,1). Stationary; the lag-2 coupling makes every large Y show up
// twice, two steps apart.
std::vector<double> mma_generate(std::uint64_t n, Rng& rng);

// Streaming form for long scans.
class MmaStream {
 public:
  explicit MmaStream(Rng rng) : rng_(rng) {
    y_m2_ = rng_.uniform01();
    y_m1_ = rng_.uniform01();
  }
  double next() {
    const double y = rng_.uniform01();
    const double x = y_m2_ > y ? y_m2_ : y;
    y_m2_ = y_m1_;
    y_m1_ = y;
    return x;
  }

 private:
  Rng rng_;
  double y_m2_, y_m1_;
};

}  // namespace extremal
