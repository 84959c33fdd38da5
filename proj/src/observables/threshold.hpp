#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "analytic/example_id.hpp"

namespace extremal {

// Threshold schedule u_n(tau): levels with n * P(X_0 > u_n(tau)) -> tau.
struct ThresholdSchedule {
  enum class Kind { Analytic, Empirical };
  Kind kind = Kind::Analytic;
  double u = 0.0;
  double tau = 0.0;
  std::uint64_t n = 0;
  std::string detail;
};

// Closed-form schedules for the worked examples:
//   Doubling13    u = log(2n / tau)
//   DoublingMix   u = log(4n / tau)
//   MMA (uniform) u = sqrt(1 - tau / n)           (P(X > u) = 1 - u^2)
//   SmithLSV / PeriodicLSV with neglog g: u = log(2n / tau)
ThresholdSchedule threshold_analytic(const ExampleSpec& ex, double tau,
                                     std::uint64_t n);

// Empirical (1 - tau/n) quantile of a calibration stream of calib_len values.
// Keeps only the top ~calib_len * tau / n values. Requires the expected
// exceedance count to be at least 50.
ThresholdSchedule threshold_empirical(const std::function<double()>& next_value,
                                      std::uint64_t calib_len, double tau,
                                      std::uint64_t n);

void validate_tau_n(double tau, std::uint64_t n);

}  // namespace extremal
