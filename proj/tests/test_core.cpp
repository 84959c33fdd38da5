#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "core/stats.hpp"

using namespace extremal;

TEST_SUITE_BEGIN("core");

TEST_CASE("rng streams are deterministic and stable") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
  // Derived streams differ from each other and from the base stream.
  Rng s0 = Rng::derive(42, 0), s1 = Rng::derive(42, 1);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += (s0.next_u64() == s1.next_u64());
  CHECK(same == 0);
}

TEST_CASE("uniform01 and bits look uniform") {
  Rng rng(7);
  double acc = 0.0;
  int ones = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    acc += u;
    ones += rng.next_bit();
  }
  CHECK(std::fabs(acc / n - 0.5) < 0.005);
  CHECK(std::fabs(double(ones) / n - 0.5) < 0.005);
}

TEST_CASE("exponential moments") {
  Rng rng(11);
  std::vector<double> xs(100000);
  for (auto& x : xs) x = rng.exponential(2.0);
  CHECK(mean_of(xs) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("incomplete gamma and chi-square tail") {
  // Q(1/2, x/2) = erfc(sqrt(x/2)) for dof 1; spot values for dof 2: e^{-x/2}.
  CHECK(chi2_sf(1.0, 1) == doctest::Approx(std::erfc(std::sqrt(0.5))).epsilon(1e-10));
  CHECK(chi2_sf(3.0, 2) == doctest::Approx(std::exp(-1.5)).epsilon(1e-12));
  CHECK(chi2_sf(10.0, 4) ==
        doctest::Approx(std::exp(-5.0) * (1.0 + 5.0)).epsilon(1e-12));
  CHECK(gamma_p(2.5, 0.0) == 0.0);
  CHECK(gamma_q(2.5, 0.0) == 1.0);
  CHECK(gamma_p(2.5, 1e3) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chi2_vs_pmf pools small cells and is calibrated on exact data") {
  // Histogram drawn exactly from geometric(3/4).
  Rng rng(123);
  const double p = 0.75;
  std::vector<std::uint64_t> counts(12, 0);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    std::uint64_t k = 1;
    while (rng.uniform01() > p && k < 12) ++k;
    ++counts[k - 1];
  }
  auto r = chi2_vs_pmf(counts, [&](std::uint64_t k) {
    return p * std::pow(1.0 - p, double(k - 1));
  });
  CHECK(r.p_value > 0.01);
  CHECK(r.dof >= 2);
}

TEST_CASE("ks statistics") {
  Rng rng(5);
  std::vector<double> xs(50000);
  for (auto& x : xs) x = rng.uniform01();
  CHECK(ks_statistic(xs, [](double x) { return x; }) < 0.01);
  std::vector<double> ys(50000);
  for (auto& y : ys) y = rng.uniform01();
  CHECK(ks_statistic2(xs, ys) < 0.012);
}

TEST_CASE("linear_fit recovers a line") {
  std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  auto f = linear_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
}

TEST_CASE("parallel_for is order-independent and propagates errors") {
  std::vector<std::size_t> out(1000, 0);
  parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = i * i; });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == i * i);
  CHECK_THROWS_AS(parallel_for(8, 2,
                               [&](std::size_t i) {
                                 if (i == 5) throw NumericError("boom");
                               }),
                  NumericError);
}

TEST_SUITE_END();
