#pragma once

#include <limits>
#include <string>
#include <vector>

#include "analytic/example_id.hpp"

namespace extremal {

// Decreasing bijection g used to turn small distances into large observable
// values; u_n schedules and their inverses all route through g.
struct GSpec {
  enum class Kind { NegLog, Pareto, Bounded };
  Kind kind = Kind::NegLog;
  double a = 1.0;  // Pareto exponent / Bounded root
  double c = 1.0;  // Bounded ceiling

  double operator()(double s) const;
  double inverse(double z) const;
  std::string name() const;
};

// Observables over [0,1]. All except Identity are of the form
// g(scaled distance to a finite set of centers).
struct ObservableSpec {
  enum class Kind {
    LogDistSingle,   // -log |x - zeta|
    LogDistPair,     // -log |x - 1/3| on [0,1/2], -log |x - 5/7| on (1/2,1]
    MixIndifferent,  // g(neutral mass) near 0, g(2 h2 |x - zeta2|) near zeta2
    Identity,        // x itself (moving-maximum process)
  };
  Kind kind = Kind::LogDistSingle;
  GSpec g;

  double zeta = 1.0 / 3.0;  // LogDistSingle center

  // MixIndifferent parameters; c1, b1 and h2 come from invariant-measure
  // calibration so both centers carry equal exceedance mass.
  double alpha = 0.2;
  double c1 = 1.0;
  double b1 = 0.0;  // subleading tail coefficient, see InvariantDensityModel
  double h2 = 1.0;
  double zeta2 = 0.75;
  double delta = 0.05;  // neighbourhood half-width; floor value outside

  double eval(double x) const;

  // Calibrated invariant-mass model mu([0,x)) = c1 x^{1-alpha} (1 + b1
  // x^alpha) and its inverse on (0, 1]; both are strictly increasing for the
  // clamped b1 range, and the inverse is what turns a mass target tau/(2n)
  // into the raw-space cut below which the neutral center exceeds.
  double neutral_mass(double x) const;
  double neutral_mass_inverse(double mass) const;
};

// Value floor returned outside the supports of localized observables;
// strictly below every achievable threshold.
inline constexpr double kObservableFloor =
    -std::numeric_limits<double>::infinity();

// One interval of an exceedance region {phi > u}.
struct ExceedInterval {
  double lo = 0.0;
  double hi = 0.0;
  std::string label;  // "zeta1", "zeta2", or a center description
};

// Geometry of {phi > u} for distance-based observables. Throws ConfigError
// when u is so low that the intervals overlap or leave their branch domains.
std::vector<ExceedInterval> exceedance_geometry(const ObservableSpec& obs,
                                                double u);

}  // namespace extremal
