#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/stats.hpp"
#include "repp/gof.hpp"
#include "repp/point_process.hpp"

using namespace extremal;

TEST_SUITE_BEGIN("repp");

TEST_CASE("projection keeps sub-tau marks and merges equal times") {
  MarkedPointSet2D cloud;
  cloud.t_max = 1.0;
  cloud.y_max = 10.0;
  cloud.points = {
      {0.1, 0.5, 0}, {0.1, 0.9, 0},  // same time, both below tau
      {0.2, 1.0, 0},                  // exactly tau: excluded (strict)
      {0.3, 0.2, 1}, {0.5, 3.0, 0},   // 3.0 above tau: excluded
      {0.7, 0.999, 0},
  };
  const auto proj = project_below(cloud, 1.0);
  REQUIRE(proj.points.size() == 3);
  CHECK(proj.points[0].t == 0.1);
  CHECK(proj.points[0].multiplicity == 2);
  CHECK(proj.points[1].t == 0.3);
  CHECK(proj.points[1].multiplicity == 1);
  CHECK(proj.points[2].t == 0.7);
  CHECK(proj.total_mass() == 4);
  // Projecting below the cloud floor leaves nothing.
  CHECK(project_below(cloud, 0.1).points.empty());
}

TEST_CASE("projection matches the binary series it came from") {
  Rng rng(15);
  const std::uint64_t n = 1000, length = 5000;
  std::vector<std::uint64_t> ones;
  for (std::uint64_t i = 0; i < length; ++i)
    if (rng.uniform01() < 0.01) ones.push_back(i);
  const BinarySeries b = BinarySeries::from_positions(length, ones);

  MarkedPointSet2D cloud;
  cloud.t_max = double(length) / double(n);
  cloud.y_max = 5.0;
  for (std::uint64_t i = 0; i < length; ++i) {
    const bool hit = std::binary_search(ones.begin(), ones.end(), i);
    if (hit)
      cloud.points.push_back({double(i) / double(n), 0.5 * rng.uniform01(), 0});
    else if (rng.uniform01() < 0.01)  // decoys above the level
      cloud.points.push_back({double(i) / double(n), 1.0 + rng.uniform01(), 0});
  }
  CHECK(projection_matches(project_below(cloud, 1.0), b, n));
  // Perturbing one atom's position must break the match.
  BinarySeries shifted = b;
  shifted.ones[0] += 1;
  CHECK_FALSE(projection_matches(project_below(cloud, 1.0), shifted, n));
}

TEST_CASE("rescaled exceedances sit at i/n with unit mass") {
  const BinarySeries b = BinarySeries::from_positions(40, {3, 17, 39});
  const auto proc = rescale_exceedances(b, 10);
  REQUIRE(proc.points.size() == 3);
  CHECK(proc.points[0].t == doctest::Approx(0.3));
  CHECK(proc.points[2].t == doctest::Approx(3.9));
  CHECK(proc.total_mass() == 3);
  CHECK(proc.t_max == doctest::Approx(4.0));
}

TEST_CASE("compound poisson mass: mean over many replicas within 3 sigma") {
  // theta tau E[size] per unit time; geometric(3/4) sizes have mean 4/3 and
  // second moment 20/9, so var of the unit-interval count is theta tau E[S^2].
  const double theta = 0.75, tau = 1.0;
  const std::vector<double> pmf = {0.75, 0.75 * 0.25, 0.75 * 0.0625,
                                   0.75 * 0.015625};
  Rng rng(2025);
  const int reps = 10000;
  double total = 0.0;
  for (int i = 0; i < reps; ++i)
    total += double(simulate_compound_poisson(theta, tau, pmf, 1.0, rng)
                        .total_mass());
  const double mean_size = 4.0 / 3.0 * (1.0 - std::pow(0.25, 4.0));  // truncated
  const double mean_model = theta * tau * mean_size;
  const double var_model = theta * tau * (20.0 / 9.0);
  const double se = std::sqrt(var_model / reps);
  CHECK(std::fabs(total / reps - mean_model) < 3.0 * se);
}

TEST_CASE("panjer count pmf: zero cell, normalization and mean") {
  CompoundPoissonSpec spec;
  spec.theta = 0.75;
  spec.tau = 2.0;
  for (int k = 1; k <= 40; ++k)
    spec.size_pmf.push_back(0.75 * std::pow(0.25, k - 1));
  const auto pmf = compound_count_pmf(spec, 80);
  CHECK(pmf[0] == doctest::Approx(std::exp(-1.5)).epsilon(1e-12));
  double total = 0.0, mean = 0.0;
  for (std::size_t c = 0; c < pmf.size(); ++c) {
    total += pmf[c];
    mean += double(c) * pmf[c];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  // Mean count = intensity * mean size = 1.5 * 4/3.
  CHECK(mean == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(spec.mean_count() == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("count gof is calibrated on its own law and guards small samples") {
  CompoundPoissonSpec spec;
  spec.theta = 0.75;
  spec.tau = 1.0;
  for (int k = 1; k <= 30; ++k)
    spec.size_pmf.push_back(0.75 * std::pow(0.25, k - 1));
  Rng rng(78);
  std::vector<std::uint64_t> counts;
  for (int i = 0; i < 4000; ++i)
    counts.push_back(
        simulate_compound_poisson(spec.theta, spec.tau, spec.size_pmf, 1.0, rng)
            .total_mass());
  const auto r = gof_compound_counts(counts, spec);
  CHECK(r.p_value > 0.01);

  counts.resize(99);
  CHECK_THROWS_AS(gof_compound_counts(counts, spec), InsufficientDataError);
}

TEST_CASE("cluster-size gof is calibrated on geometric sizes") {
  Rng rng(31337);
  const double p = 0.75;
  std::vector<std::uint64_t> sizes;
  for (int i = 0; i < 5000; ++i) {
    std::uint64_t k = 1;
    while (rng.uniform01() > p) ++k;
    sizes.push_back(k);
  }
  std::vector<double> pmf;
  for (int k = 1; k <= 64; ++k) pmf.push_back(p * std::pow(1.0 - p, k - 1));
  CHECK(gof_cluster_sizes(sizes, pmf).p_value > 0.01);
}

TEST_CASE("periodic limit cloud: geometry, ladders, and truncation") {
  const double theta = 0.75, gamma = 4.0, t_max = 200.0, y_max = 8.0;
  const auto cloud =
      simulate_limit_cloud_periodic(theta, gamma, t_max, y_max, 424242, 11);

  // Time-sorted with ties adjacent (the ladder above one base shares its t).
  for (std::size_t i = 1; i < cloud.points.size(); ++i)
    CHECK(cloud.points[i - 1].t <= cloud.points[i].t);

  // Group by exact time: each group is a geometric ladder y, gamma y, ...
  std::map<double, std::vector<double>> piles;
  for (const auto& m : cloud.points) piles[m.t].push_back(m.y);
  CHECK(piles.size() >= 50);
  for (auto& [t, ys] : piles) {
    std::sort(ys.begin(), ys.end());
    for (std::size_t j = 1; j < ys.size(); ++j)
      CHECK(ys[j] == doctest::Approx(ys[j - 1] * gamma).epsilon(1e-12));
    CHECK(ys.back() <= y_max);
    // Truncation at y_max is tight: one more rung would overflow.
    CHECK(ys.back() * gamma > y_max);
  }

  // Base marks (pile bottoms) form a Poisson process of intensity theta per
  // unit time and height; check the count within 4 sigma.
  const double expected = theta * t_max * y_max;
  CHECK(std::fabs(double(piles.size()) - expected) <
        4.0 * std::sqrt(expected));

  // Projected multiplicity below tau equals the ladder count below tau.
  const double tau = 3.0;
  const auto proj = project_below(cloud, tau);
  std::size_t idx = 0;
  for (const auto& [t, ys] : piles) {
    const double y0 = *std::min_element(ys.begin(), ys.end());
    if (y0 >= tau) continue;
    const std::uint64_t rungs =
        1 + std::uint64_t(std::floor(std::log(tau / y0) / std::log(gamma)));
    const std::uint64_t visible = std::min<std::uint64_t>(rungs, ys.size());
    REQUIRE(idx < proj.points.size());
    CHECK(proj.points[idx].t == t);
    CHECK(proj.points[idx].multiplicity == visible);
    ++idx;
  }
  CHECK(idx == proj.points.size());
}

TEST_CASE("raising y_max only appends marks to the periodic cloud") {
  const auto low =
      simulate_limit_cloud_periodic(0.75, 4.0, 50.0, 4.0, 99, 123);
  const auto high =
      simulate_limit_cloud_periodic(0.75, 4.0, 50.0, 9.0, 99, 123);
  REQUIRE(high.points.size() > low.points.size());
  std::map<std::pair<double, double>, int> bag;
  for (const auto& m : high.points) ++bag[{m.t, m.y}];
  for (const auto& m : low.points) {
    auto it = bag.find({m.t, m.y});
    REQUIRE(it != bag.end());
    REQUIRE(it->second > 0);
    --it->second;
  }
}

TEST_CASE("poisson limit cloud: count law and simple projection") {
  Rng rng(5150);
  const double rate = 0.5, t_max = 400.0, y_max = 2.0;
  const auto cloud = simulate_limit_cloud_poisson(rate, t_max, y_max, rng);
  const double expected = rate * t_max * y_max;
  CHECK(std::fabs(double(cloud.points.size()) - expected) <
        4.0 * std::sqrt(expected));
  for (std::size_t i = 1; i < cloud.points.size(); ++i)
    CHECK(cloud.points[i - 1].t < cloud.points[i].t);
  // Every cluster is a single mark: all projected multiplicities are one.
  const auto proj = project_below(cloud, 1.0);
  for (const auto& p : proj.points) CHECK(p.multiplicity == 1);
  // Projection keeps exactly the sub-tau marks.
  std::size_t below = 0;
  for (const auto& m : cloud.points) below += m.y < 1.0;
  CHECK(proj.points.size() == below);
}

TEST_SUITE_END();
