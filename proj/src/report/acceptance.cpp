#include "report/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "analytic/oracle.hpp"
#include "clustering/cluster.hpp"
#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "core/stats.hpp"
#include "dynamics/maps.hpp"
#include "report/examples.hpp"
#include "report/scan.hpp"
#include "repp/point_process.hpp"

namespace extremal {

namespace {

using clock_type = std::chrono::steady_clock;

// ---------------------------------------------------------------------------
// Check bookkeeping: each comparison appends "name=value (bound)" to the
// detail line and folds into the verdict. A failed comparison is tagged MISS
// so the one-line report pinpoints what went out of range.

struct Checker {
  bool ok = true;
  std::ostringstream detail;

  void sep() {
    if (detail.tellp() > 0) detail << "; ";
  }
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
  }
  bool close(const std::string& name, double value, double target,
             double tol) {
    const bool good = std::fabs(value - target) <= tol;
    sep();
    detail << name << "=" << fmt(value) << " (want " << fmt(target) << "+-"
           << fmt(tol) << (good ? ")" : ") MISS");
    ok = ok && good;
    return good;
  }
  bool in_range(const std::string& name, double value, double lo, double hi) {
    const bool good = value >= lo && value <= hi;
    sep();
    detail << name << "=" << fmt(value) << " (want [" << fmt(lo) << ","
           << fmt(hi) << (good ? "])" : "]) MISS");
    ok = ok && good;
    return good;
  }
  bool at_least(const std::string& name, double value, double lo) {
    const bool good = value >= lo;
    sep();
    detail << name << "=" << fmt(value) << " (want >=" << fmt(lo)
           << (good ? ")" : ") MISS");
    ok = ok && good;
    return good;
  }
  bool at_most(const std::string& name, double value, double hi) {
    const bool good = value <= hi;
    sep();
    detail << name << "=" << fmt(value) << " (want <=" << fmt(hi)
           << (good ? ")" : ") MISS");
    ok = ok && good;
    return good;
  }
  bool is_true(const std::string& name, bool value) {
    sep();
    detail << name << "=" << (value ? "yes" : "no") << (value ? "" : " MISS");
    ok = ok && value;
    return value;
  }
  void note(const std::string& text) {
    sep();
    detail << text;
  }
};

// ---------------------------------------------------------------------------
// Scale-dependent knobs. The full column is the gate as stated; the reduced
// column keeps every mechanism exercised at selftest speed, with windows
// widened in step with the smaller samples.

struct Knobs {
  // C1/C2 string corpus
  std::uint64_t strings, max_len;
  // C3 moving maximum
  std::uint64_t mma_n, mma_reps;
  double mma_sf, mma_theta_tol, mma_pi2_min;
  // C4/C5 doubling examples
  std::uint64_t dbl_n, dbl_reps, sel_n_small;
  double dbl_sf, dbl_theta_tol, dbl_mean_tol, dbl_p_min;
  // C6 interval measures
  std::uint64_t q_n, q_len;
  // C7/C8/C9 intermittent examples
  std::vector<std::uint64_t> lsv_grid;
  std::uint64_t lsv_reps;
  double lsv_sf, smith_lo, smith_hi, per_theta_tol, per_p_min;
  double mass_tol, slope_tol;
  // C10 limit processes
  std::uint64_t cp_reps, pile_bases;
  double cp_zero_tol, pile_p_min;
  // C11 kernels
  std::uint64_t bits_steps;
};

Knobs full_knobs() {
  Knobs k;
  k.strings = 12000;
  k.max_len = 5000;
  k.mma_n = 1000000;
  k.mma_reps = 50;
  k.mma_sf = 200.0;
  k.mma_theta_tol = 0.03;
  k.mma_pi2_min = 0.95;
  k.dbl_n = 1000000;
  k.dbl_reps = 50;
  k.sel_n_small = 10000;
  k.dbl_sf = 200.0;
  k.dbl_theta_tol = 0.02;
  k.dbl_mean_tol = 0.05;
  k.dbl_p_min = 0.01;
  k.q_n = 1000;
  k.q_len = 10000000;
  k.lsv_grid = {10000, 100000, 1000000};
  k.lsv_reps = 30;
  k.lsv_sf = 600.0;
  k.smith_lo = 0.42;
  k.smith_hi = 0.58;
  k.per_theta_tol = 0.08;
  k.per_p_min = 0.01;
  k.mass_tol = 0.05;
  k.slope_tol = 0.10;
  k.cp_reps = 100000;
  k.pile_bases = 100000;
  k.cp_zero_tol = 0.01;
  k.pile_p_min = 0.01;
  k.bits_steps = 100000000;
  return k;
}

Knobs reduced_knobs() {
  Knobs k;
  k.strings = 2000;
  k.max_len = 600;
  k.mma_n = 100000;
  k.mma_reps = 10;
  k.mma_sf = 100.0;
  k.mma_theta_tol = 0.10;
  k.mma_pi2_min = 0.90;
  k.dbl_n = 100000;
  k.dbl_reps = 10;
  k.sel_n_small = 1000;
  k.dbl_sf = 100.0;
  k.dbl_theta_tol = 0.05;
  k.dbl_mean_tol = 0.10;
  k.dbl_p_min = 0.005;
  k.q_n = 300;
  k.q_len = 2000000;
  k.lsv_grid = {1000, 10000, 100000};
  k.lsv_reps = 8;
  k.lsv_sf = 300.0;
  k.smith_lo = 0.30;
  k.smith_hi = 0.70;
  k.per_theta_tol = 0.15;
  k.per_p_min = 0.005;
  k.mass_tol = 0.10;
  k.slope_tol = 0.20;
  k.cp_reps = 20000;
  k.pile_bases = 20000;
  k.cp_zero_tol = 0.02;
  k.pile_p_min = 0.005;
  k.bits_steps = 10000000;
  return k;
}

// ---------------------------------------------------------------------------
// Shared replica machinery. Mirrors the estimate driver (same per-replica
// streams) but keeps raw integer tallies so each criterion can form its own
// pooled statistics.

struct PoolRun {
  std::uint64_t q_zero = 0, classified = 0, censored = 0, n_exceed = 0;
  std::uint64_t complete = 0, exceed_complete = 0;
  std::vector<std::uint64_t> h_counts;     // pooled complete-size histogram
  std::vector<std::uint64_t> zeta2_sizes;  // complete second-peak clusters
  std::uint64_t neutral_points = 0, neutral_clusters = 0;
  std::vector<double> rep_freq;            // neutral clusters per unit time
  std::vector<BinarySeries> series;        // kept on request

  double theta() const { return double(q_zero) / double(classified); }
  double mean_size() const {
    return double(exceed_complete) / double(complete);
  }
  double identity_product() const { return theta() * mean_size(); }
  double pi_hat(std::size_t k) const {
    return k >= 1 && k <= h_counts.size()
               ? double(h_counts[k - 1]) / double(complete)
               : 0.0;
  }
};

PoolRun pool_run(const ExampleContext& ctx, std::uint64_t n, std::uint64_t q,
                 std::uint64_t reps, int workers, bool keep_series) {
  struct Slot {
    ClusterStats stats;
    std::uint64_t neutral_points = 0, neutral_clusters = 0;
    std::vector<std::uint64_t> zeta2_sizes;
    BinarySeries series;
  };
  const std::uint64_t length = ctx.cfg.series_length(n);
  std::vector<Slot> slots(reps);
  parallel_for(reps, workers, [&](std::size_t r) {
    Rng rng = Rng::derive(ctx.cfg.seed, r);
    const auto scan = scan_example(ctx, n, ctx.cfg.tau, length, rng);
    Slot s;
    s.series = hits_to_series(scan, ctx.cfg.tau);
    s.stats = cluster_stats(s.series, q);
    // Source labels aligned with the series: same strict height cut.
    std::vector<std::uint8_t> src;
    src.reserve(s.series.ones.size());
    for (const auto& h : scan.hits)
      if (h.height < ctx.cfg.tau) src.push_back(h.source);
    for (auto v : src) s.neutral_points += v == 0;
    std::size_t idx = 0;
    for (const auto& c : runs_decluster(s.series, q)) {
      while (idx < s.series.ones.size() && s.series.ones[idx] < c.first) ++idx;
      if (!c.truncated && src[idx] == 0) ++s.neutral_clusters;
      if (!c.truncated && src[idx] == 1) s.zeta2_sizes.push_back(c.size);
    }
    slots[r] = std::move(s);
  });

  PoolRun out;
  for (auto& s : slots) {
    out.q_zero += s.stats.q_counts.empty() ? 0 : s.stats.q_counts[0];
    out.classified += s.stats.classified;
    out.censored += s.stats.censored;
    out.n_exceed += s.stats.n_exceed;
    out.complete += s.stats.complete_clusters;
    out.exceed_complete += s.stats.exceed_in_complete;
    if (out.h_counts.size() < s.stats.h_counts.size())
      out.h_counts.resize(s.stats.h_counts.size(), 0);
    for (std::size_t k = 0; k < s.stats.h_counts.size(); ++k)
      out.h_counts[k] += s.stats.h_counts[k];
    out.zeta2_sizes.insert(out.zeta2_sizes.end(), s.zeta2_sizes.begin(),
                           s.zeta2_sizes.end());
    out.neutral_points += s.neutral_points;
    out.neutral_clusters += s.neutral_clusters;
    out.rep_freq.push_back(double(s.neutral_clusters) * double(n) /
                           double(length));
    if (keep_series) out.series.push_back(std::move(s.series));
  }
  return out;
}

ExperimentConfig base_config(ExampleId id, std::uint64_t n, double tau,
                             double sf, std::uint64_t reps,
                             const AcceptanceOptions& opt) {
  ExperimentConfig cfg;
  cfg.example.id = id;
  cfg.n = n;
  cfg.tau = tau;
  cfg.sample_factor = sf;
  cfg.replicas = reps;
  cfg.seed = opt.seed;
  cfg.workers = opt.workers;
  return cfg;
}

// Data-driven q, shaped like the estimate driver: several short replicas at
// the small scale (pushing its pooled minimum down) against one long replica
// at the large scale, which sharpens the growth test without touching the
// decision rule itself.
std::uint64_t auto_select_q(const ExampleContext& ctx, std::uint64_t n_small,
                            std::uint64_t n_large) {
  const std::vector<std::uint64_t> grid{n_small, n_large};
  auto series_at = [&](std::uint64_t ni) {
    const std::uint64_t reps = ni == n_large ? 1 : 8;
    const std::size_t gi = ni == n_large ? 1 : 0;
    std::vector<BinarySeries> out;
    for (std::uint64_t r = 0; r < reps; ++r) {
      Rng rng = Rng::derive(ctx.cfg.seed, kStreamSelectQ + gi * 1024 + r);
      const auto scan =
          scan_example(ctx, ni, ctx.cfg.tau, ctx.cfg.series_length(ni), rng);
      out.push_back(hits_to_series(scan, ctx.cfg.tau));
    }
    return out;
  };
  return select_q(series_at, grid, 8).q;
}

// ---------------------------------------------------------------------------
// C1 + C2: random-string corpus.

struct Corpus {
  std::vector<BinarySeries> strings;
  std::vector<std::uint64_t> qs;
};

Corpus make_corpus(const Knobs& k, std::uint64_t seed) {
  Corpus c;
  c.strings.reserve(k.strings);
  c.qs.reserve(k.strings);
  Rng rng = Rng::derive(seed, kStreamAux);
  for (std::uint64_t i = 0; i < k.strings; ++i) {
    const std::uint64_t len =
        50 + std::uint64_t(rng.uniform01() * double(k.max_len - 50));
    const double density = rng.uniform(0.05, 0.5);
    std::vector<std::uint64_t> ones;
    for (std::uint64_t p = 0; p < len; ++p)
      if (rng.uniform01() < density) ones.push_back(p);
    c.strings.push_back(BinarySeries::from_positions(len, std::move(ones)));
    c.qs.push_back(1 + i % 3);
  }
  return c;
}

void criterion_c1(const Corpus& corpus, Checker& ch) {
  std::uint64_t bad = 0;
  for (std::size_t i = 0; i < corpus.strings.size(); ++i) {
    const auto& b = corpus.strings[i];
    const std::uint64_t q = corpus.qs[i];
    const auto stats = cluster_stats(b, q);

    // Independent tally straight from the cluster partition.
    std::vector<std::uint64_t> h2;
    std::uint64_t truncated_members = 0;
    for (const auto& c : runs_decluster(b, q)) {
      if (c.truncated) {
        truncated_members += c.size;
        continue;
      }
      if (h2.size() < c.size) h2.resize(c.size, 0);
      ++h2[c.size - 1];
    }
    bool good = b.count_ones() == stats.n_exceed &&
                truncated_members == stats.censored &&
                stats.classified == stats.exceed_in_complete &&
                h2 == stats.h_counts;
    // The chain with kappa == k followers is exactly the (size - k)-th member
    // of its cluster, so count[k] must equal #complete clusters of size > k.
    std::uint64_t suffix = 0;
    std::vector<std::uint64_t> ge(h2.size(), 0);
    for (std::size_t s = h2.size(); s > 0; --s)
      ge[s - 1] = (suffix += h2[s - 1]);
    const std::size_t kmax = std::max(stats.q_counts.size(), ge.size());
    for (std::size_t kk = 0; kk < kmax; ++kk) {
      const std::uint64_t lhs =
          kk < stats.q_counts.size() ? stats.q_counts[kk] : 0;
      const std::uint64_t rhs = kk < ge.size() ? ge[kk] : 0;
      good = good && lhs == rhs;
    }
    bad += !good;
  }
  ch.at_most("mismatched_strings", double(bad), 0.0);
  ch.note("corpus=" + std::to_string(corpus.strings.size()));
}

void criterion_c2(const Corpus& corpus, Checker& ch) {
  std::uint64_t bad = 0, skipped = 0;
  for (std::size_t i = 0; i < corpus.strings.size(); ++i) {
    try {
      bad += !mean_identity_check(corpus.strings[i], corpus.qs[i]).exact;
    } catch (const InsufficientDataError&) {
      ++skipped;  // no complete cluster: the identity has no terms
    }
  }
  ch.at_most("inexact_strings", double(bad), 0.0);
  ch.note("checked=" + std::to_string(corpus.strings.size() - skipped) +
          " skipped=" + std::to_string(skipped));
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            std::ostream* log) {
  const Knobs k = opt.full ? full_knobs() : reduced_knobs();
  std::vector<CriterionResult> results;

  auto exec = [&](const char* id, const char* name, auto&& body) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    const auto t0 = clock_type::now();
    Checker ch;
    try {
      body(ch);
    } catch (const std::exception& e) {
      ch.ok = false;
      ch.note(std::string("exception: ") + e.what());
    }
    r.pass = ch.ok;
    r.detail = ch.detail.str();
    r.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
    if (log) {
      char secs[32];
      std::snprintf(secs, sizeof secs, "%.1fs", r.seconds);
      (*log) << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name
             << ": " << r.detail << " [" << secs << "]" << std::endl;
    }
    results.push_back(std::move(r));
  };

  // Shared corpus for the two combinatorial criteria.
  const Corpus corpus = make_corpus(k, opt.seed);

  exec("C1", "cluster sizes: partition route vs classification route",
       [&](Checker& ch) { criterion_c1(corpus, ch); });

  exec("C2", "finite-sample mean identity is exact",
       [&](Checker& ch) { criterion_c2(corpus, ch); });

  exec("C3", "moving maximum: theta and the all-pairs size law",
       [&](Checker& ch) {
         const auto cfg = base_config(ExampleId::MMA, k.mma_n, 2.0, k.mma_sf,
                                      k.mma_reps, opt);
         const auto ctx = build_example_context(cfg);
         const auto pr =
             pool_run(ctx, cfg.n, 2, cfg.replicas, opt.workers, false);
         ch.close("theta_hat", pr.theta(), 0.5, k.mma_theta_tol);
         ch.at_least("pi_hat(2)", pr.pi_hat(2), k.mma_pi2_min);
         ch.note("exceedances=" + std::to_string(pr.n_exceed));
       });

  exec("C4", "doubling map, one center: theta, size law, mean",
       [&](Checker& ch) {
         const auto cfg = base_config(ExampleId::Doubling13, k.dbl_n, 1.0,
                                      k.dbl_sf, k.dbl_reps, opt);
         const auto ctx = build_example_context(cfg);
         const std::uint64_t q_auto = auto_select_q(ctx, k.sel_n_small, cfg.n);
         ch.close("q_auto", double(q_auto), 2.0, 0.0);
         const auto pr =
             pool_run(ctx, cfg.n, 2, cfg.replicas, opt.workers, false);
         // A corrupted reference must trip the gate; the selftest flips this
         // switch to prove the comparisons are live.
         const double theta_ref = opt.mutate_oracle ? 0.90 : 0.75;
         ch.close("theta_hat", pr.theta(), theta_ref, k.dbl_theta_tol);
         const auto gof = chi2_vs_pmf(
             pr.h_counts,
             [](std::uint64_t s) {
               return 0.75 * std::pow(0.25, double(s - 1));
             },
             1);
         ch.at_least("size_law_p", gof.p_value, k.dbl_p_min);
         ch.close("mean_size", pr.mean_size(), 4.0 / 3.0, k.dbl_mean_tol);
       });

  exec("C5", "doubling map, two centers: theta and mean via the mixture",
       [&](Checker& ch) {
         const auto cfg = base_config(ExampleId::DoublingMix, k.dbl_n, 1.0,
                                      k.dbl_sf, k.dbl_reps, opt);
         const auto ctx = build_example_context(cfg);
         const std::uint64_t q_auto = auto_select_q(ctx, k.sel_n_small, cfg.n);
         ch.close("q_auto", double(q_auto), 3.0, 0.0);
         const auto pr =
             pool_run(ctx, cfg.n, 3, cfg.replicas, opt.workers, false);
         ch.close("theta_hat", pr.theta(), 13.0 / 16.0, k.dbl_theta_tol);
         ch.close("mean_size", pr.mean_size(), 16.0 / 13.0, k.dbl_mean_tol);
       });

  exec("C6", "interval measures of the kappa sets vs orbit frequencies",
       [&](Checker& ch) {
         for (const auto id :
              {ExampleId::Doubling13, ExampleId::DoublingMix}) {
           const auto cfg = base_config(id, k.q_n, 1.0, 1.0, 1, opt);
           const auto ctx = build_example_context(cfg);
           const std::uint64_t q = ctx.summary.q;
           Rng rng = Rng::derive(opt.seed, kStreamAux + 17);
           const auto scan = scan_example(ctx, cfg.n, cfg.tau, k.q_len, rng);
           const auto series = hits_to_series(scan, cfg.tau);
           const auto cls = count_Q(series, q);

           // Batch the orbit to get a Monte Carlo standard error.
           constexpr std::uint64_t kBatches = 20;
           const std::uint64_t batch_len = k.q_len / kBatches;
           for (std::uint64_t kap = 0; kap <= 3; ++kap) {
             std::vector<double> freqs(kBatches, 0.0);
             for (std::size_t i = 0; i < series.ones.size(); ++i) {
               if (cls.kappa[i] != std::int64_t(kap)) continue;
               const std::uint64_t bi =
                   std::min(series.ones[i] / batch_len, kBatches - 1);
               freqs[bi] += 1.0;
             }
             for (auto& f : freqs) f /= double(batch_len);
             const auto ms = mean_se(freqs);
             const double model =
                 Qk_measure_doubling(id, kap, cfg.tau, cfg.n, q);
             ch.close(example_name(id) + ".k" + std::to_string(kap), ms.mean,
                      model, std::max(3.0 * ms.se, 1e-12));
           }
         }
       });

  // C7 keeps its per-scale runs alive for C9.
  std::vector<PoolRun> smith_runs;
  std::vector<std::uint64_t> smith_grid;

  exec("C7",
       "intermittent map, non-recurrent center: slow theta, exact identity",
       [&](Checker& ch) {
         auto cfg = base_config(ExampleId::SmithLSV, k.lsv_grid.back(), 1.0,
                                k.lsv_sf, k.lsv_reps, opt);
         cfg.n_grid = k.lsv_grid;
         // The mass-split check downstream rides on the extrapolated tail
         // constant, so calibrate on a longer orbit than the CLI default.
         cfg.calib_samples = 40000000;
         const auto ctx = build_example_context(cfg);
         smith_grid = k.lsv_grid;
         std::vector<double> pi1;
         for (std::uint64_t n : k.lsv_grid) {
           auto pr = pool_run(ctx, n, 1, cfg.replicas, opt.workers,
                              n == k.lsv_grid.back());
           pi1.push_back(pr.pi_hat(1));
           ch.at_most("identity_err.n" + std::to_string(n),
                      std::fabs(pr.identity_product() - 1.0), 1e-12);
           smith_runs.push_back(std::move(pr));
         }
         const auto& last = smith_runs.back();
         ch.in_range("theta_hat", last.theta(), k.smith_lo, k.smith_hi);
         bool increasing = true;
         for (std::size_t i = 1; i < pi1.size(); ++i)
           increasing = increasing && pi1[i] > pi1[i - 1];
         ch.is_true("pi1_strictly_increasing", increasing);
         ch.is_true("limit_mean_not_inverse_theta",
                    !ctx.summary.ei_equals_inverse_mean);
         // Sensitivity of theta to the runs parameter, from the kept series.
         for (std::uint64_t q : {std::uint64_t(2), std::uint64_t(3)}) {
           std::uint64_t q0 = 0, cl = 0;
           for (const auto& b : last.series) {
             const auto st = cluster_stats(b, q);
             q0 += st.q_counts.empty() ? 0 : st.q_counts[0];
             cl += st.classified;
           }
           ch.note("theta_hat(q=" + std::to_string(q) +
                   ")=" + Checker::fmt(double(q0) / double(cl)));
         }
       });

  exec("C8", "intermittent map, periodic center: gamma, theta, size law",
       [&](Checker& ch) {
         const double alpha = 0.2;
         const auto orbit = lsv_periodic_orbit(alpha, 2);
         const double fd =
             lsv_gamma_finite_difference(alpha, 2, orbit.zeta2, 1e-5);
         ch.at_most("gamma_rel_err",
                    std::fabs(fd - orbit.gamma) / orbit.gamma, 1e-6);
         const double theta_model = 0.5 * (1.0 - 1.0 / orbit.gamma);

         auto cfg = base_config(ExampleId::PeriodicLSV, k.lsv_grid.back(),
                                1.0, k.lsv_sf, k.lsv_reps, opt);
         cfg.example.alpha = alpha;
         cfg.example.p = 2;
         cfg.calib_samples = 40000000;
         const auto ctx = build_example_context(cfg);
         const auto pr =
             pool_run(ctx, cfg.n, 2, cfg.replicas, opt.workers, false);
         ch.close("theta_hat", pr.theta(), theta_model, k.per_theta_tol);

         std::vector<std::uint64_t> hist;
         for (auto s : pr.zeta2_sizes) {
           if (hist.size() < s) hist.resize(s, 0);
           ++hist[s - 1];
         }
         const double succ = 1.0 - 1.0 / orbit.gamma;
         const auto gof = chi2_vs_pmf(
             hist,
             [succ](std::uint64_t s) {
               return succ * std::pow(1.0 - succ, double(s - 1));
             },
             1);
         ch.at_least("zeta2_size_law_p", gof.p_value, k.per_p_min);
         ch.note("zeta2_clusters=" + std::to_string(pr.zeta2_sizes.size()));
       });

  exec("C9", "escape of mass: even split, vanishing neutral cluster rate",
       [&](Checker& ch) {
         if (smith_runs.size() != smith_grid.size())
           throw InsufficientDataError("criterion reuses the C7 runs");
         const auto& last = smith_runs.back();
         const double frac =
             double(last.neutral_points) / double(last.n_exceed);
         ch.close("neutral_mass_fraction", frac, 0.5, k.mass_tol);
         std::vector<double> lx, ly;
         for (std::size_t i = 0; i < smith_runs.size(); ++i) {
           const auto ms = mean_se(smith_runs[i].rep_freq);
           if (ms.mean > 0.0) {
             lx.push_back(std::log(double(smith_grid[i])));
             ly.push_back(std::log(ms.mean));
           }
         }
         if (lx.size() < 2)
           throw InsufficientDataError("no neutral clusters observed");
         const auto fit = linear_fit(lx, ly);
         ch.close("freq_slope", fit.slope, -0.25, k.slope_tol);
       });

  exec("C10", "limit processes: zero cell and ladder multiplicities",
       [&](Checker& ch) {
         const double theta = 0.75, tau = 1.0;
         std::vector<double> size_pmf;
         for (int s = 1; s <= 40; ++s)
           size_pmf.push_back(theta * std::pow(1.0 - theta, s - 1));
         Rng rng = Rng::derive(opt.seed, kStreamAux + 33);
         std::uint64_t zeros = 0;
         for (std::uint64_t i = 0; i < k.cp_reps; ++i) {
           const auto proc =
               simulate_compound_poisson(theta, tau, size_pmf, 1.0, rng);
           zeros += proc.total_mass() == 0;
         }
         ch.close("zero_cell", double(zeros) / double(k.cp_reps),
                  std::exp(-theta * tau), k.cp_zero_tol);

         // One unit strip of the periodic limit cloud; projecting below tau
         // turns each ladder into one atom whose multiplicity counts the
         // rungs under the level.
         const double t_max = double(k.pile_bases) / theta;
         const auto cloud = simulate_limit_cloud_periodic(
             theta, 4.0, t_max, 1.0, opt.seed, kStreamAux + 47);
         const auto proj = project_below(cloud, tau);
         std::vector<std::uint64_t> hist;
         for (const auto& p : proj.points) {
           if (hist.size() < p.multiplicity) hist.resize(p.multiplicity, 0);
           ++hist[p.multiplicity - 1];
         }
         const auto gof = chi2_vs_pmf(
             hist,
             [theta](std::uint64_t s) {
               return theta * std::pow(1.0 - theta, double(s - 1));
             },
             1);
         ch.at_least("ladder_mult_p", gof.p_value, k.pile_p_min);
         ch.note("bases=" + std::to_string(proj.points.size()));
       });

  exec("C11", "numeric kernels: branch inverse and exact doubling bits",
       [&](Checker& ch) {
         Rng rng = Rng::derive(opt.seed, kStreamAux + 64);
         double worst = 0.0;
         for (int i = 0; i < 1000; ++i) {
           const double alpha = rng.uniform(0.02, 0.23);
           const double y = rng.uniform01();
           const double x = lsv_preimage_left(alpha, y);
           const double back =
               x * (1.0 + std::pow(2.0, alpha) * std::pow(x, alpha));
           worst = std::max(worst, std::fabs(back - y));
         }
         ch.at_most("preimage_roundtrip", worst, 1e-12);

         // Bit-exactness: the shifting-window state against windowed reads of
         // the same bit stream laid out as bytes. Any slip in shift order or
         // bit endianness shows up in the running checksums.
         const std::uint64_t steps = k.bits_steps;
         Rng word_rng = Rng::derive(opt.seed, kStreamAux + 65);
         const std::uint64_t n_words = (steps + 64) / 64 + 2;
         std::vector<std::uint8_t> bytes;
         bytes.reserve(n_words * 8);
         for (std::uint64_t i = 0; i < n_words; ++i) {
           const std::uint64_t w = word_rng.next_u64();
           for (int b = 7; b >= 0; --b)
             bytes.push_back(std::uint8_t(w >> (8 * b)));
         }
         auto window = [&bytes](std::uint64_t bit) {
           std::uint64_t v = 0;
           const std::uint64_t byte = bit / 8;
           for (int j = 0; j < 8; ++j) v = (v << 8) | bytes[byte + j];
           const int off = int(bit % 8);
           if (off == 0) return v;
           return (v << off) | (std::uint64_t(bytes[byte + 8]) >> (8 - off));
         };

         Rng map_rng = Rng::derive(opt.seed, kStreamAux + 65);
         const std::uint64_t frac0 = map_rng.next_u64();
         DoublingState st(frac0, map_rng);
         std::uint64_t sum_map = 0, sum_ref = 0;
         bool spot_ok = true;
         const std::uint64_t spot_stride = steps / 13 + 1;
         for (std::uint64_t i = 0; i <= steps; ++i) {
           sum_map += st.frac();
           sum_ref += window(i);
           if (i % spot_stride == 0)
             spot_ok = spot_ok && st.frac() == window(i);
           st.step();
         }
         ch.is_true("window_spot_checks", spot_ok);
         ch.is_true("checksums_equal", sum_map == sum_ref);
         ch.note("steps=" + std::to_string(steps));
       });

  return results;
}

}  // namespace extremal
