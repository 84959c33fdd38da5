#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "analytic/oracle.hpp"
#include "clustering/binary_series.hpp"
#include "clustering/cluster.hpp"
#include "core/rng.hpp"
#include "dynamics/maps.hpp"

using namespace extremal;

namespace {

ExampleSpec spec(ExampleId id, double alpha = 0.2, int p = 2) {
  ExampleSpec ex;
  ex.id = id;
  ex.alpha = alpha;
  ex.p = p;
  return ex;
}

}  // namespace

TEST_SUITE_BEGIN("analytic");

TEST_CASE("orbit derivative against the finite difference of T^p") {
  for (double alpha : {0.1, 0.2}) {
    for (int p : {2, 3, 4}) {
      const auto orbit = lsv_periodic_orbit(alpha, p);
      const double g = lsv_gamma(alpha, p);
      CHECK(g == doctest::Approx(orbit.gamma));
      const double fd = lsv_gamma_finite_difference(alpha, p, orbit.zeta2);
      CHECK(std::fabs(g - fd) / g < 1e-6);
      CHECK(g > 1.0);
    }
  }
}

TEST_CASE("periodic orbit closes and respects its itinerary") {
  const double alpha = 0.2;
  for (int p : {2, 3, 5}) {
    const auto orbit = lsv_periodic_orbit(alpha, p);
    REQUIRE(int(orbit.points.size()) == p);
    CHECK(orbit.zeta2 == orbit.points[0]);
    CHECK(orbit.zeta2 > 0.5);
    CHECK(orbit.xi == orbit.points[p - 1]);
    CHECK(orbit.xi < 0.5);
    // The orbit closes under the map to solver precision.
    double x = orbit.zeta2;
    for (int i = 0; i < p; ++i) x = lsv_step(alpha, x);
    CHECK(std::fabs(x - orbit.zeta2) < 1e-10);
    // Exactly one member on the left branch.
    int left = 0;
    for (double pt : orbit.points) left += pt < 0.5;
    CHECK(left == 1);
  }
}

TEST_CASE("vanishing alpha recovers the doubling-map cycle") {
  // As alpha -> 0 the map tends to 2x mod 1, whose one-left-visit p-cycle
  // has left member (2^{p-1}-1)/(2^p-1) and multiplier 2^p.
  const double alpha = 1e-4;
  for (int p : {2, 3, 4}) {
    const auto orbit = lsv_periodic_orbit(alpha, p);
    const double xi_ref =
        (std::pow(2.0, p - 1) - 1.0) / (std::pow(2.0, p) - 1.0);
    CHECK(std::fabs(orbit.xi - xi_ref) < 2e-3);
    CHECK(std::fabs(orbit.gamma - std::pow(2.0, p)) <
          0.02 * std::pow(2.0, p));
  }
}

TEST_CASE("preperiodic second center: hits the cycle, never returns") {
  const double alpha = 0.2;
  const auto orbit = lsv_periodic_orbit(alpha, 2);
  const double zs = smith_zeta2(alpha);
  // Right-branch preimage of the cycle's right member.
  CHECK(zs == doctest::Approx((orbit.zeta2 + 1.0) / 2.0).epsilon(1e-12));
  CHECK(lsv_step(alpha, zs) == doctest::Approx(orbit.zeta2).epsilon(1e-12));
  // The forward orbit falls onto the 2-cycle and stays away from the center.
  // The cycle is repelling, so roundoff grows by gamma each period; thirty
  // steps keep the drift far below the orbit-to-center distance.
  double x = lsv_step(alpha, zs);
  for (int i = 0; i < 30; ++i) {
    x = lsv_step(alpha, x);
    CHECK(std::fabs(x - zs) > 0.1);
  }
}

TEST_CASE("closed-form theta, q and the inverse-mean dichotomy") {
  const auto mma = analytic_summary(spec(ExampleId::MMA), 64);
  CHECK(mma.theta == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mma.pi.at(2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mma.pi.at(1) == 0.0);
  CHECK(mma.q == 2);
  CHECK(mma.ei_equals_inverse_mean);

  const auto d13 = analytic_summary(spec(ExampleId::Doubling13), 64);
  CHECK(d13.theta == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(d13.gamma == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(d13.q == 2);
  CHECK(d13.ei_equals_inverse_mean);

  const auto mix = analytic_summary(spec(ExampleId::DoublingMix), 64);
  CHECK(mix.theta == doctest::Approx(13.0 / 16.0).epsilon(1e-15));
  CHECK(mix.pi.at(1) == doctest::Approx(85.0 / 104.0).epsilon(1e-14));
  CHECK(mix.mean_cluster == doctest::Approx(16.0 / 13.0).epsilon(1e-13));
  CHECK(mix.q == 3);
  CHECK(mix.ei_equals_inverse_mean);

  const auto smith = analytic_summary(spec(ExampleId::SmithLSV), 64);
  CHECK(smith.theta == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(smith.pi.at(1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(smith.q == 1);
  CHECK_FALSE(smith.ei_equals_inverse_mean);

  const auto per = analytic_summary(spec(ExampleId::PeriodicLSV), 64);
  const double g = lsv_gamma(0.2, 2);
  CHECK(per.theta == doctest::Approx(0.5 * (1.0 - 1.0 / g)).epsilon(1e-13));
  CHECK(per.q == 2);
  CHECK_FALSE(per.ei_equals_inverse_mean);
}

TEST_CASE("pi normalizes and reproduces the mean") {
  for (ExampleId id : {ExampleId::MMA, ExampleId::Doubling13,
                       ExampleId::DoublingMix, ExampleId::SmithLSV,
                       ExampleId::PeriodicLSV}) {
    const auto s = analytic_summary(spec(id), 64);
    double total = 0.0, mean = 0.0;
    for (std::size_t k = 1; k <= s.pi.p.size(); ++k) {
      CHECK(s.pi.at(k) >= 0.0);
      total += s.pi.at(k);
      mean += double(k) * s.pi.at(k);
    }
    CHECK(total >= 1.0 - 1e-12);
    CHECK(total <= 1.0 + 1e-12);
    CHECK(std::fabs(mean - s.mean_cluster) < 1e-12);
    CHECK(std::fabs(mean - s.pi.mean) < 1e-12);
    // Standalone entry points agree with the summary.
    CHECK(analytic_theta(spec(id)) == doctest::Approx(s.theta).epsilon(1e-14));
    CHECK(analytic_mean(spec(id)) ==
          doctest::Approx(s.mean_cluster).epsilon(1e-13));
    CHECK(analytic_pi(spec(id), 1) == doctest::Approx(s.pi.at(1)).epsilon(1e-14));
  }
}

TEST_CASE("theta times mean: identity holds or fails by exactly a half") {
  // Three examples satisfy theta = 1/mean; the two intermittent two-peak
  // examples lose half the cluster mass to the neutral point, so for them
  // 1/theta = 2 * mean instead.
  for (ExampleId id :
       {ExampleId::MMA, ExampleId::Doubling13, ExampleId::DoublingMix}) {
    const auto s = analytic_summary(spec(id), 64);
    CHECK(std::fabs(s.theta * s.mean_cluster - 1.0) < 1e-12);
  }
  for (ExampleId id : {ExampleId::SmithLSV, ExampleId::PeriodicLSV}) {
    const auto s = analytic_summary(spec(id), 64);
    CHECK(std::fabs(1.0 / s.theta - 2.0 * s.mean_cluster) < 1e-12);
    CHECK(s.theta * s.mean_cluster < 0.75);  // visibly off the identity
  }
}

TEST_CASE("Q-measure telescopes to pi and yields theta at kappa zero") {
  const double tau = 1.0;
  const std::uint64_t n = 100000;
  for (ExampleId id : {ExampleId::Doubling13, ExampleId::DoublingMix}) {
    const auto s = analytic_summary(spec(id), 64);
    const std::uint64_t q = s.q;
    const double u_mass = tau / double(n);  // mu of the exceedance set
    const double q0 = Qk_measure_doubling(id, 0, tau, n, q);
    CHECK(std::fabs(q0 / u_mass - s.theta) < 1e-12);
    for (std::uint64_t k = 1; k <= 6; ++k) {
      const double qk = Qk_measure_doubling(id, k, tau, n, q);
      const double qkm1 = Qk_measure_doubling(id, k - 1, tau, n, q);
      // (Q_{k-1} - Q_k) / Q_0 is the mass of clusters of size exactly k.
      CHECK(std::fabs((qkm1 - qk) / q0 - s.pi.at(k)) < 1e-12);
      CHECK(qk < qkm1);
    }
  }
}

TEST_CASE("Q-measure matches empirical chain frequencies on one long orbit") {
  // Doubling map, peak at 1/3: mark positions within e^{-u_n} of the center,
  // classify chains with q = 2, and compare per-position frequencies with
  // the closed-form interval measures. Monte Carlo tolerance: 4 sqrt(count).
  const double tau = 2.0;
  const std::uint64_t n = 10000;
  const std::uint64_t length = 5000000;
  const double r = tau / (2.0 * double(n));

  Rng rng = Rng::derive(909, 3);
  const std::uint64_t f0 = rng.next_u64();
  DoublingState st(f0, rng);
  std::vector<std::uint64_t> positions;
  for (std::uint64_t i = 0; i < length; ++i) {
    if (std::fabs(st.value() - 1.0 / 3.0) < r) positions.push_back(i);
    st.step();
  }
  const BinarySeries b = BinarySeries::from_positions(length, positions);
  const auto qc = count_Q(b, 2);
  for (std::uint64_t k = 0; k <= 2; ++k) {
    const double expected =
        double(length) * Qk_measure_doubling(ExampleId::Doubling13, k, tau, n, 2);
    const double got = double(qc.count(k));
    CHECK(std::fabs(got - expected) <= 4.0 * std::sqrt(expected));
  }
}

TEST_CASE("finite-size exponent of the run-length estimator") {
  CHECK(finite_theta_asymptotics(spec(ExampleId::MMA)).exponent ==
        doctest::Approx(1.0));
  CHECK(finite_theta_asymptotics(spec(ExampleId::Doubling13)).exponent == 0.0);
  CHECK(finite_theta_asymptotics(spec(ExampleId::DoublingMix)).exponent == 0.0);
  const auto lsv = finite_theta_asymptotics(spec(ExampleId::SmithLSV));
  CHECK(lsv.exponent == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(lsv.theta_limit == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(finite_theta_asymptotics(spec(ExampleId::PeriodicLSV)).exponent ==
        doctest::Approx(0.25).epsilon(1e-12));
}

TEST_SUITE_END();
