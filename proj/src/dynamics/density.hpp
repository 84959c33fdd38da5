#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "core/rng.hpp"
#include "dynamics/maps.hpp"

namespace extremal {

// Empirical model of the intermittent map's invariant measure near its two
// kinds of extreme centers: mu([0,s)) ~ c1 s^(1-alpha) (1 + b1 s^alpha) at
// the neutral fixed point, and a locally flat density h at points away from
// 0. The subleading term matters: the density is x^{-alpha} times a function
// that is merely continuous at 0, so a pure power fitted at accessible
// scales overshoots the asymptotic constant by 20-30% and the error is then
// amplified when the law is extrapolated down to level-tau cut scales.
struct InvariantDensityModel {
  double alpha = 0.0;
  double c1 = 0.0;              // leading tail constant (intercept of the fit)
  double b1 = 0.0;              // subleading coefficient, relative s^alpha term
  double fitted_exponent = 0.0; // free-exponent diagnostic over the s grid
  std::uint64_t samples = 0;
  std::map<double, double> density_at;  // requested point -> estimated density

  double density(double point) const;
};

// One long orbit; tail counts on a log-spaced s grid plus window counts
// around the requested points.
InvariantDensityModel calibrate_lsv_density(double alpha,
                                            const std::vector<double>& points,
                                            std::uint64_t n_samples,
                                            std::uint64_t burn_in, Rng rng,
                                            double window = 0.005);

}  // namespace extremal
