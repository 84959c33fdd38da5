#pragma once

#include <cstdint>
#include <vector>

#include "analytic/example_id.hpp"

namespace extremal {

// Repelling periodic orbit of the intermittent map with itinerary
// (right, right, ..., right, left): zeta2 is the orbit point in [1/2,1] whose
// p-1 successors stay in the right branch before one left-branch return.
struct PeriodicOrbit {
  std::vector<double> points;  // zeta2, T(zeta2), ..., T^{p-1}(zeta2)
  double zeta2 = 0.0;          // = points[0]
  double xi = 0.0;             // the left-branch member, = points[p-1]
  double gamma = 0.0;          // derivative of T^p along the orbit
};

PeriodicOrbit lsv_periodic_orbit(double alpha, int p);

// Derivative of T^p at the periodic point, via the branch-derivative product.
double lsv_gamma(double alpha, int p);

// Central finite difference of T^p around x0 (cross-check for lsv_gamma).
double lsv_gamma_finite_difference(double alpha, int p, double x0,
                                   double h = 1e-5);

// Preperiodic center for the non-periodic construction: the right-branch
// preimage of the right member of the period-2 orbit. Its forward orbit falls
// onto {xi, eta} and never returns, so the center itself is not recurrent.
double smith_zeta2(double alpha);

// Limiting cluster-size law pi(k), k >= 1.
struct PiTable {
  std::vector<double> p;  // p[k-1] = pi(k)
  double mean = 0.0;
  double at(std::uint64_t k) const {
    return k >= 1 && k <= p.size() ? p[k - 1] : 0.0;
  }
};

struct AnalyticSummary {
  ExampleSpec ex;
  double theta = 0.0;
  PiTable pi;
  double mean_cluster = 0.0;  // sum k pi(k)
  bool ei_equals_inverse_mean = false;
  double gamma = 0.0;  // repelling derivative where applicable, else NaN
  std::uint64_t q = 0;  // within-cluster recurrence bound used by estimators
};

double analytic_theta(const ExampleSpec& ex);
double analytic_pi(const ExampleSpec& ex, std::uint64_t kappa);
double analytic_mean(const ExampleSpec& ex);
AnalyticSummary analytic_summary(const ExampleSpec& ex,
                                 std::uint64_t kappa_max = 16);

// Exact interval measure of the kappa-classification sets for the doubling
// examples at level u_n(tau): the probability that a position is an
// exceedance followed by exactly kappa further exceedances of its chain.
// Valid once the intervals fit inside their branch frames; q must equal the
// example's recurrence bound (2 or 3).
double Qk_measure_doubling(ExampleId id, std::uint64_t kappa, double tau,
                           std::uint64_t n, std::uint64_t q);

// Leading finite-n behaviour of the run-length estimator:
// theta_n = theta + K n^{-exponent} with K not computed here.
struct FiniteTheta {
  double theta_limit = 0.0;
  double exponent = 0.0;  // 0 means "no power correction" (constant in n)
};

FiniteTheta finite_theta_asymptotics(const ExampleSpec& ex);

}  // namespace extremal
