#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace extremal {

struct MeanSE {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

double mean_of(const std::vector<double>& xs);
double sample_sd(const std::vector<double>& xs);
MeanSE mean_se(const std::vector<double>& xs);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper tail of the chi-square distribution with `dof` degrees of freedom.
double chi2_sf(double stat, int dof);

struct Chi2Result {
  double stat = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int cells = 0;
};

// Pearson chi-square of an integer histogram against a pmf on {1,2,...} (or
// {0,1,...} if counts start at 0; `first` gives the value of counts[0]).
// Adjacent cells are pooled left-to-right until each expected count is at
// least `min_expected`; the remainder of the pmf mass forms the tail cell.
Chi2Result chi2_vs_pmf(const std::vector<std::uint64_t>& counts,
                       const std::function<double(std::uint64_t)>& pmf,
                       std::uint64_t first = 1, double min_expected = 5.0);

// One-sample Kolmogorov-Smirnov statistic against a cdf. Sorts a copy.
double ks_statistic(std::vector<double> xs,
                    const std::function<double(double)>& cdf);
// Two-sample KS statistic. Sorts copies.
double ks_statistic2(std::vector<double> xs, std::vector<double> ys);

struct LinFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace extremal
