#include "analytic/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "dynamics/maps.hpp"

namespace extremal {

std::string example_name(ExampleId id) {
  switch (id) {
    case ExampleId::MMA:
      return "mma";
    case ExampleId::Doubling13:
      return "doubling13";
    case ExampleId::DoublingMix:
      return "doubling-mix";
    case ExampleId::SmithLSV:
      return "smith-lsv";
    case ExampleId::PeriodicLSV:
      return "periodic-lsv";
  }
  return "?";
}

bool example_parse(const std::string& name, ExampleId& out) {
  if (name == "mma") out = ExampleId::MMA;
  else if (name == "doubling13") out = ExampleId::Doubling13;
  else if (name == "doubling-mix") out = ExampleId::DoublingMix;
  else if (name == "smith-lsv") out = ExampleId::SmithLSV;
  else if (name == "periodic-lsv") out = ExampleId::PeriodicLSV;
  else return false;
  return true;
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < kLsvAlphaMax))
    throw ConfigError(
        "intermittent-map examples require alpha in (0, sqrt(5)-2)");
}

}  // namespace

PeriodicOrbit lsv_periodic_orbit(double alpha, int p) {
  check_alpha(alpha);
  if (p < 2) throw ConfigError("lsv_periodic_orbit: period must be >= 2");
  if (p > 40) throw ConfigError("lsv_periodic_orbit: period too large");
  const LsvMap map(alpha);
  const double two_pm1 = std::pow(2.0, double(p - 1));

  // Solve for the left-branch member xi: after one left step and p-1 right
  // steps the orbit must close, i.e. 2^{p-1} T_left(xi) - (2^{p-1} - 1) = xi.
  auto G = [&](double xi) {
    return two_pm1 * map.step(xi) - (two_pm1 - 1.0) - xi;
  };
  double lo = 0.0, hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (G(mid) < 0.0 ? lo : hi) = mid;
  }
  const double xi = 0.5 * (lo + hi);

  PeriodicOrbit orbit;
  orbit.xi = xi;
  orbit.zeta2 = map.step(xi);
  orbit.points.push_back(orbit.zeta2);
  double x = orbit.zeta2;
  orbit.gamma = map.derivative(xi);
  for (int j = 0; j + 1 < p; ++j) {
    if (x < 0.5)
      throw NumericError("lsv_periodic_orbit: itinerary left the right branch");
    orbit.gamma *= map.derivative(x);
    x = map.step(x);
    if (j + 2 < p) orbit.points.push_back(x);
  }
  orbit.points.push_back(xi);
  // Closure check: the reconstructed orbit must return to xi. Forward
  // iteration amplifies the root error by gamma, so scale the tolerance.
  if (std::fabs(x - xi) > 1e-13 * std::max(orbit.gamma, 1.0) + 1e-12)
    throw NumericError("lsv_periodic_orbit: orbit failed to close");
  return orbit;
}

double lsv_gamma(double alpha, int p) {
  return lsv_periodic_orbit(alpha, p).gamma;
}

double lsv_gamma_finite_difference(double alpha, int p, double x0, double h) {
  const LsvMap map(alpha);
  auto iterate = [&](double x) {
    for (int i = 0; i < p; ++i) x = map.step(x);
    return x;
  };
  return (iterate(x0 + h) - iterate(x0 - h)) / (2.0 * h);
}

double smith_zeta2(double alpha) {
  const PeriodicOrbit orbit = lsv_periodic_orbit(alpha, 2);
  // Right-branch preimage of the right member eta: z = (eta + 1) / 2.
  const double z = 0.5 * (orbit.zeta2 + 1.0);
  if (!(z > 0.5) || !(z < 1.0))
    throw NumericError("smith_zeta2: preimage left (1/2,1)");
  return z;
}

namespace {

PiTable geometric_pi(double success, std::uint64_t kappa_max) {
  PiTable t;
  t.p.resize(kappa_max);
  for (std::uint64_t k = 1; k <= kappa_max; ++k)
    t.p[k - 1] = success * std::pow(1.0 - success, double(k - 1));
  t.mean = 1.0 / success;
  return t;
}

}  // namespace

double analytic_theta(const ExampleSpec& ex) {
  switch (ex.id) {
    case ExampleId::MMA:
      return 0.5;
    case ExampleId::Doubling13:
      return 0.75;
    case ExampleId::DoublingMix:
      return 13.0 / 16.0;
    case ExampleId::SmithLSV:
      check_alpha(ex.alpha);
      return 0.5;
    case ExampleId::PeriodicLSV: {
      const double gamma = lsv_gamma(ex.alpha, ex.p);
      return 0.5 * (1.0 - 1.0 / gamma);
    }
  }
  throw ConfigError("analytic_theta: unknown example");
}

double analytic_pi(const ExampleSpec& ex, std::uint64_t kappa) {
  if (kappa == 0) throw ConfigError("analytic_pi: kappa starts at 1");
  switch (ex.id) {
    case ExampleId::MMA:
      return kappa == 2 ? 1.0 : 0.0;
    case ExampleId::Doubling13:
      return 0.75 * std::pow(0.25, double(kappa - 1));
    case ExampleId::DoublingMix: {
      // Mixture of the two geometric branches weighted by their end-of-chain
      // measures (3/4 at 1/3 with ratio 1/4; 7/8 at 5/7 with ratio 1/8).
      const double a = 0.75 * 0.75 * std::pow(0.25, double(kappa - 1));
      const double b = 0.875 * 0.875 * std::pow(0.125, double(kappa - 1));
      return (a + b) / (13.0 / 8.0);
    }
    case ExampleId::SmithLSV:
      check_alpha(ex.alpha);
      return kappa == 1 ? 1.0 : 0.0;
    case ExampleId::PeriodicLSV: {
      const double gamma = lsv_gamma(ex.alpha, ex.p);
      const double s = 1.0 - 1.0 / gamma;
      return s * std::pow(1.0 - s, double(kappa - 1));
    }
  }
  throw ConfigError("analytic_pi: unknown example");
}

double analytic_mean(const ExampleSpec& ex) {
  switch (ex.id) {
    case ExampleId::MMA:
      return 2.0;
    case ExampleId::Doubling13:
      return 4.0 / 3.0;
    case ExampleId::DoublingMix:
      return 16.0 / 13.0;
    case ExampleId::SmithLSV:
      check_alpha(ex.alpha);
      return 1.0;
    case ExampleId::PeriodicLSV: {
      const double gamma = lsv_gamma(ex.alpha, ex.p);
      return gamma / (gamma - 1.0);
    }
  }
  throw ConfigError("analytic_mean: unknown example");
}

AnalyticSummary analytic_summary(const ExampleSpec& ex,
                                 std::uint64_t kappa_max) {
  AnalyticSummary s;
  s.ex = ex;
  s.theta = analytic_theta(ex);
  s.mean_cluster = analytic_mean(ex);
  s.gamma = std::numeric_limits<double>::quiet_NaN();
  switch (ex.id) {
    case ExampleId::MMA:
      s.pi.p.assign(kappa_max, 0.0);
      if (kappa_max >= 2) s.pi.p[1] = 1.0;
      s.pi.mean = 2.0;
      s.q = 2;
      break;
    case ExampleId::Doubling13:
      s.pi = geometric_pi(0.75, kappa_max);
      s.q = 2;
      s.gamma = 4.0;
      break;
    case ExampleId::DoublingMix:
      s.pi.p.resize(kappa_max);
      for (std::uint64_t k = 1; k <= kappa_max; ++k)
        s.pi.p[k - 1] = analytic_pi(ex, k);
      s.pi.mean = 16.0 / 13.0;
      s.q = 3;
      break;
    case ExampleId::SmithLSV:
      s.pi.p.assign(kappa_max, 0.0);
      s.pi.p[0] = 1.0;
      s.pi.mean = 1.0;
      s.q = 1;
      break;
    case ExampleId::PeriodicLSV: {
      s.gamma = lsv_gamma(ex.alpha, ex.p);
      s.pi = geometric_pi(1.0 - 1.0 / s.gamma, kappa_max);
      s.q = std::uint64_t(ex.p);
      break;
    }
  }
  // theta * mean == 1 exactly for the fully clustered examples; the two
  // intermittent constructions break the equality by the factor 2 coming from
  // the neutral point's vanishing cluster share.
  s.ei_equals_inverse_mean =
      std::fabs(s.theta * s.mean_cluster - 1.0) < 1e-12;
  return s;
}

double Qk_measure_doubling(ExampleId id, std::uint64_t kappa, double tau,
                           std::uint64_t n, std::uint64_t q) {
  if (!(tau > 0.0) || n == 0)
    throw ConfigError("Qk_measure_doubling: need tau > 0 and n > 0");
  if (id == ExampleId::Doubling13) {
    if (q != 2)
      throw ConfigError("Qk_measure_doubling: closed form requires q = 2");
    // Interval frame: radius tau/(2n) around 1/3 must stay inside (0, 1/2).
    if (tau / (2.0 * double(n)) >= 1.0 / 12.0)
      throw ConfigError("Qk_measure_doubling: n too small for the frame");
    return std::pow(0.25, double(kappa)) * 0.75 * (tau / double(n));
  }
  if (id == ExampleId::DoublingMix) {
    if (q != 3)
      throw ConfigError("Qk_measure_doubling: closed form requires q = 3");
    if (tau / (4.0 * double(n)) >= 1.0 / 24.0)
      throw ConfigError("Qk_measure_doubling: n too small for the frame");
    const double half = tau / (2.0 * double(n));
    return std::pow(0.25, double(kappa)) * 0.75 * half +
           std::pow(0.125, double(kappa)) * 0.875 * half;
  }
  throw ConfigError("Qk_measure_doubling: only the doubling examples");
}

FiniteTheta finite_theta_asymptotics(const ExampleSpec& ex) {
  FiniteTheta f;
  f.theta_limit = analytic_theta(ex);
  switch (ex.id) {
    case ExampleId::MMA:
      f.exponent = 1.0;  // theta_n = alpha_n^4 / (1 + alpha_n)
      break;
    case ExampleId::Doubling13:
    case ExampleId::DoublingMix:
      f.exponent = 0.0;  // exact at every n inside the interval frame
      break;
    case ExampleId::SmithLSV:
    case ExampleId::PeriodicLSV:
      // The neutral point contributes chain-end mass ~ y_n^alpha with
      // y_n ~ n^{-1/(1-alpha)}.
      f.exponent = ex.alpha / (1.0 - ex.alpha);
      break;
  }
  return f;
}

}  // namespace extremal
