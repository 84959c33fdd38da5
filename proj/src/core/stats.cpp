#include "core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace extremal {

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) throw InsufficientDataError("mean of empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / double(xs.size());
}

double sample_sd(const std::vector<double>& xs) {
  if (xs.size() < 2) throw InsufficientDataError("sd needs at least 2 points");
  const double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / double(xs.size() - 1));
}

MeanSE mean_se(const std::vector<double>& xs) {
  MeanSE r;
  r.n = xs.size();
  r.mean = mean_of(xs);
  r.se = xs.size() >= 2 ? sample_sd(xs) / std::sqrt(double(xs.size())) : 0.0;
  return r;
}

namespace {

// Series expansion of P(a,x), good for x < a+1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x) (modified Lentz), good for x >= a+1.
double gamma_q_cf(double a, double x) {
  const double fpmin = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw NumericError("gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw NumericError("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi2_sf(double stat, int dof) {
  if (dof <= 0) throw NumericError("chi2_sf: dof must be positive");
  if (stat <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * stat);
}

Chi2Result chi2_vs_pmf(const std::vector<std::uint64_t>& counts,
                       const std::function<double(std::uint64_t)>& pmf,
                       std::uint64_t first, double min_expected) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw InsufficientDataError("chi2_vs_pmf: empty histogram");

  // Pool adjacent values until the expected count clears min_expected.
  std::vector<double> obs_cells, exp_cells;
  double obs_acc = 0.0, exp_acc = 0.0, mass_used = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double p = pmf(first + i);
    obs_acc += double(counts[i]);
    exp_acc += p * double(total);
    mass_used += p;
    if (exp_acc >= min_expected) {
      obs_cells.push_back(obs_acc);
      exp_cells.push_back(exp_acc);
      obs_acc = exp_acc = 0.0;
    }
  }
  // Tail cell: everything beyond the histogram plus any leftover pool.
  const double tail_mass = std::max(0.0, 1.0 - mass_used);
  obs_cells.push_back(obs_acc);
  exp_cells.push_back(exp_acc + tail_mass * double(total));
  if (exp_cells.back() < min_expected && exp_cells.size() >= 2) {
    exp_cells[exp_cells.size() - 2] += exp_cells.back();
    obs_cells[obs_cells.size() - 2] += obs_cells.back();
    exp_cells.pop_back();
    obs_cells.pop_back();
  }
  if (exp_cells.size() < 2)
    throw InsufficientDataError("chi2_vs_pmf: fewer than 2 usable cells");

  Chi2Result r;
  r.cells = int(exp_cells.size());
  r.dof = r.cells - 1;
  for (std::size_t i = 0; i < exp_cells.size(); ++i) {
    const double d = obs_cells[i] - exp_cells[i];
    r.stat += d * d / exp_cells[i];
  }
  r.p_value = chi2_sf(r.stat, r.dof);
  return r;
}

double ks_statistic(std::vector<double> xs,
                    const std::function<double(double)>& cdf) {
  if (xs.empty()) throw InsufficientDataError("ks_statistic: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = double(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::max(f - double(i) / n, double(i + 1) / n - f));
  }
  return d;
}

double ks_statistic2(std::vector<double> xs, std::vector<double> ys) {
  if (xs.empty() || ys.empty())
    throw InsufficientDataError("ks_statistic2: empty sample");
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < xs.size() && j < ys.size()) {
    const double v = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] <= v) ++i;
    while (j < ys.size() && ys[j] <= v) ++j;
    d = std::max(d, std::fabs(double(i) / double(xs.size()) -
                              double(j) / double(ys.size())));
  }
  return d;
}

LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InsufficientDataError("linear_fit: need >= 2 paired points");
  const double mx = mean_of(x), my = mean_of(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw NumericError("linear_fit: degenerate x");
  LinFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

}  // namespace extremal
