#include "observables/observable.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace extremal {

double GSpec::operator()(double s) const {
  switch (kind) {
    case Kind::NegLog:
      return -std::log(s);
    case Kind::Pareto:
      return std::pow(s, -1.0 / a);
    case Kind::Bounded:
      return c - std::pow(s, 1.0 / a);
  }
  return 0.0;
}

double GSpec::inverse(double z) const {
  switch (kind) {
    case Kind::NegLog:
      return std::exp(-z);
    case Kind::Pareto:
      return std::pow(z, -a);
    case Kind::Bounded:
      if (z > c) throw NumericError("GSpec: value above the Bounded ceiling");
      return std::pow(c - z, a);
  }
  return 0.0;
}

std::string GSpec::name() const {
  switch (kind) {
    case Kind::NegLog:
      return "neglog";
    case Kind::Pareto:
      return "pareto(" + std::to_string(a) + ")";
    case Kind::Bounded:
      return "bounded(" + std::to_string(c) + "," + std::to_string(a) + ")";
  }
  return "?";
}

double ObservableSpec::eval(double x) const {
  switch (kind) {
    case Kind::LogDistSingle:
      return -std::log(std::fabs(x - zeta));
    case Kind::LogDistPair:
      return x <= 0.5 ? -std::log(std::fabs(x - 1.0 / 3.0))
                      : -std::log(std::fabs(x - 5.0 / 7.0));
    case Kind::MixIndifferent: {
      if (x >= 0.0 && x < delta) return g(neutral_mass(x));
      const double d = std::fabs(x - zeta2);
      if (d < delta) return g(2.0 * h2 * d);
      return kObservableFloor;
    }
    case Kind::Identity:
      return x;
  }
  return kObservableFloor;
}

double ObservableSpec::neutral_mass(double x) const {
  return c1 * std::pow(x, 1.0 - alpha) * (1.0 + b1 * std::pow(x, alpha));
}

double ObservableSpec::neutral_mass_inverse(double mass) const {
  if (!(mass > 0.0)) throw NumericError("neutral_mass_inverse: mass <= 0");
  // Newton from the pure-power start, bisection-safeguarded inside a bracket
  // so a large |b1| cannot push an iterate out of (0, hi].
  double lo = 0.0;
  double hi = std::pow(mass / c1, 1.0 / (1.0 - alpha));
  if (b1 > 0.0) hi = std::min(hi, mass / (c1 * b1));
  while (neutral_mass(hi) < mass) {
    hi *= 2.0;
    if (hi > 1e6) throw NumericError("neutral_mass_inverse: no bracket");
  }
  double y = hi;
  for (int it = 0; it < 80; ++it) {
    const double f = neutral_mass(y) - mass;
    if (f > 0.0)
      hi = y;
    else
      lo = y;
    const double deriv =
        c1 * ((1.0 - alpha) * std::pow(y, -alpha) + b1);
    double next = y - f / deriv;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - y) <= 1e-14 * y) return next;
    y = next;
  }
  return y;
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("exceedance_geometry: ") + what);
}

}  // namespace

std::vector<ExceedInterval> exceedance_geometry(const ObservableSpec& obs,
                                                double u) {
  std::vector<ExceedInterval> out;
  switch (obs.kind) {
    case ObservableSpec::Kind::LogDistSingle: {
      const double r = std::exp(-u);
      require(obs.zeta - r > 0.0 && obs.zeta + r < 1.0,
              "radius crosses the domain boundary");
      // Keep the ball inside one monotone branch of the doubling map.
      require(obs.zeta + r <= 0.5 || obs.zeta - r >= 0.5,
              "radius crosses the branch cut at 1/2");
      out.push_back({obs.zeta - r, obs.zeta + r, "zeta1"});
      return out;
    }
    case ObservableSpec::Kind::LogDistPair: {
      const double r = std::exp(-u);
      require(1.0 / 3.0 + r <= 0.5 && 1.0 / 3.0 - r >= 0.0,
              "first interval leaves [0,1/2]");
      require(5.0 / 7.0 - r > 0.5 && 5.0 / 7.0 + r <= 1.0,
              "second interval leaves (1/2,1]");
      out.push_back({1.0 / 3.0 - r, 1.0 / 3.0 + r, "zeta1"});
      out.push_back({5.0 / 7.0 - r, 5.0 / 7.0 + r, "zeta2"});
      return out;
    }
    case ObservableSpec::Kind::MixIndifferent: {
      const double z = obs.g.inverse(u);
      const double y = obs.neutral_mass_inverse(z);
      const double d = z / (2.0 * obs.h2);
      require(y < obs.delta, "neutral-point interval exceeds delta window");
      require(d < obs.delta, "repelling-point interval exceeds delta window");
      require(obs.zeta2 - d > 0.5 && obs.zeta2 + d < 1.0,
              "repelling-point interval leaves (1/2,1)");
      out.push_back({0.0, y, "zeta1"});
      out.push_back({obs.zeta2 - d, obs.zeta2 + d, "zeta2"});
      return out;
    }
    case ObservableSpec::Kind::Identity:
      throw ConfigError(
          "exceedance_geometry: identity observable has no interval form");
  }
  return out;
}

}  // namespace extremal
