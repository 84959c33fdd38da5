#include "dynamics/mma.hpp"

namespace extremal {

std::vector<double> mma_generate(std::uint64_t n, Rng& rng) {
  std::vector<double> xs(n);
  double y_m2 = rng.uniform01();
  double y_m1 = rng.uniform01();
  for (auto& x : xs) {
    const double y = rng.uniform01();
    x = y_m2 > y ? y_m2 : y;
    y_m2 = y_m1;
    y_m1 = y;
  }
  return xs;
}

}  // namespace extremal
