#include "observables/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "core/errors.hpp"

namespace extremal {

void validate_tau_n(double tau, std::uint64_t n) {
  if (!(tau > 0.0)) throw ConfigError("tau must be positive");
  if (n == 0) throw ConfigError("n must be positive");
  if (tau >= double(n))
    throw ConfigError("tau must be below n (exceedances must be rare)");
}

ThresholdSchedule threshold_analytic(const ExampleSpec& ex, double tau,
                                     std::uint64_t n) {
  validate_tau_n(tau, n);
  ThresholdSchedule s;
  s.kind = ThresholdSchedule::Kind::Analytic;
  s.tau = tau;
  s.n = n;
  switch (ex.id) {
    case ExampleId::Doubling13:
      s.u = std::log(2.0 * double(n) / tau);
      s.detail = "log(2n/tau)";
      return s;
    case ExampleId::DoublingMix:
      s.u = std::log(4.0 * double(n) / tau);
      s.detail = "log(4n/tau)";
      return s;
    case ExampleId::MMA:
      s.u = std::sqrt(1.0 - tau / double(n));
      s.detail = "sqrt(1 - tau/n)";
      return s;
    case ExampleId::SmithLSV:
    case ExampleId::PeriodicLSV:
      // Both centers are calibrated to carry mass tau/(2n) each.
      s.u = std::log(2.0 * double(n) / tau);
      s.detail = "log(2n/tau)";
      return s;
  }
  throw ConfigError("threshold_analytic: unsupported example");
}

ThresholdSchedule threshold_empirical(const std::function<double()>& next_value,
                                      std::uint64_t calib_len, double tau,
                                      std::uint64_t n) {
  validate_tau_n(tau, n);
  const double expected = double(calib_len) * tau / double(n);
  if (expected < 50.0)
    throw InsufficientDataError(
        "threshold_empirical: expected fewer than 50 exceedances in the "
        "calibration stream; increase calib_len");

  // u is the k-th largest value with k = round(expected) + 1, so the strictly
  // larger count comes out at round(expected). A min-heap holds the top k.
  const std::uint64_t k = std::uint64_t(std::llround(expected)) + 1;
  std::priority_queue<double, std::vector<double>, std::greater<double>> top;
  for (std::uint64_t i = 0; i < calib_len; ++i) {
    const double v = next_value();
    if (top.size() < k) {
      top.push(v);
    } else if (v > top.top()) {
      top.pop();
      top.push(v);
    }
  }
  ThresholdSchedule s;
  s.kind = ThresholdSchedule::Kind::Empirical;
  s.tau = tau;
  s.n = n;
  s.u = top.top();
  s.detail = "empirical quantile, calib_len=" + std::to_string(calib_len);
  return s;
}

}  // namespace extremal
