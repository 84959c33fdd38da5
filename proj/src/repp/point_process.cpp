#include "repp/point_process.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace extremal {

PointProcess1D rescale_exceedances(const BinarySeries& b, std::uint64_t n) {
  if (n == 0) throw ConfigError("rescale_exceedances: n must be positive");
  PointProcess1D out;
  out.t_max = double(b.length) / double(n);
  out.points.reserve(b.ones.size());
  for (std::uint64_t p : b.ones)
    out.points.push_back({double(p) / double(n), 1});
  return out;
}

PointProcess1D project_below(const MarkedPointSet2D& cloud, double tau) {
  PointProcess1D out;
  out.t_max = cloud.t_max;
  for (const auto& m : cloud.points) {
    if (!(m.y < tau)) continue;
    if (!out.points.empty() && out.points.back().t == m.t)
      ++out.points.back().multiplicity;
    else
      out.points.push_back({m.t, 1});
  }
  return out;
}

bool projection_matches(const PointProcess1D& projected, const BinarySeries& b,
                        std::uint64_t n) {
  if (projected.points.size() != b.ones.size()) return false;
  for (std::size_t i = 0; i < b.ones.size(); ++i) {
    if (projected.points[i].multiplicity != 1) return false;
    const auto pos = std::llround(projected.points[i].t * double(n));
    if (pos < 0 || std::uint64_t(pos) != b.ones[i]) return false;
  }
  return true;
}

PointProcess1D simulate_compound_poisson(double theta, double tau,
                                         const std::vector<double>& size_pmf,
                                         double t_max, Rng& rng) {
  if (!(theta > 0.0) || !(tau > 0.0) || !(t_max > 0.0))
    throw ConfigError("simulate_compound_poisson: rates must be positive");
  if (size_pmf.empty())
    throw ConfigError("simulate_compound_poisson: empty size law");
  PointProcess1D out;
  out.t_max = t_max;
  const double rate = theta * tau;
  double t = rng.exponential(rate);
  while (t < t_max) {
    // Inverse-CDF draw; any mass the table truncates goes to the last entry.
    double u = rng.uniform01();
    std::uint64_t size = size_pmf.size();
    for (std::size_t k = 0; k < size_pmf.size(); ++k) {
      u -= size_pmf[k];
      if (u < 0.0) {
        size = k + 1;
        break;
      }
    }
    out.points.push_back({t, size});
    t += rng.exponential(rate);
  }
  return out;
}

MarkedPointSet2D simulate_limit_cloud_periodic(double theta, double gamma,
                                               double t_max, double y_max,
                                               std::uint64_t master_seed,
                                               std::uint64_t stream) {
  if (!(theta > 0.0) || !(gamma > 1.0))
    throw ConfigError("simulate_limit_cloud_periodic: need theta>0, gamma>1");
  if (!(t_max > 0.0) || !(y_max > 0.0))
    throw ConfigError("simulate_limit_cloud_periodic: empty window");
  MarkedPointSet2D cloud;
  cloud.t_max = t_max;
  cloud.y_max = y_max;
  const std::uint64_t strips = std::uint64_t(std::ceil(y_max));
  for (std::uint64_t i = 0; i < strips; ++i) {
    Rng rng = Rng::derive(master_seed, stream + i);
    double t = rng.exponential(theta);
    while (t < t_max) {
      const double base = rng.uniform(double(i), double(i + 1));
      for (double y = base; y <= y_max; y *= gamma) {
        cloud.points.push_back({t, y, 1});
        // A base drawn above y_max (possible only in the top partial strip)
        // contributes nothing; the loop guard already covers it.
      }
      t += rng.exponential(theta);
    }
  }
  std::sort(cloud.points.begin(), cloud.points.end(),
            [](const MarkedPoint& a, const MarkedPoint& b) {
              return a.t < b.t || (a.t == b.t && a.y < b.y);
            });
  return cloud;
}

MarkedPointSet2D simulate_limit_cloud_poisson(double rate, double t_max,
                                              double y_max, Rng& rng) {
  if (!(rate > 0.0) || !(t_max > 0.0) || !(y_max > 0.0))
    throw ConfigError("simulate_limit_cloud_poisson: rates must be positive");
  MarkedPointSet2D cloud;
  cloud.t_max = t_max;
  cloud.y_max = y_max;
  // Unit-rate arrivals along the time axis thinned to the rectangle: the
  // count is Poisson(rate * t_max * y_max) with uniform positions either way.
  const double total = rate * t_max * y_max;
  double s = rng.exponential(total);
  while (s < 1.0) {
    cloud.points.push_back(
        {s * t_max, rng.uniform(0.0, y_max), 1});
    s += rng.exponential(total);
  }
  std::sort(cloud.points.begin(), cloud.points.end(),
            [](const MarkedPoint& a, const MarkedPoint& b) {
              return a.t < b.t || (a.t == b.t && a.y < b.y);
            });
  return cloud;
}

}  // namespace extremal
