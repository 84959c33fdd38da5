#include "report/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "analytic/oracle.hpp"
#include "clustering/cluster.hpp"
#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/stats.hpp"
#include "dynamics/maps.hpp"
#include "report/examples.hpp"
#include "report/scan.hpp"
#include "repp/gof.hpp"
#include "repp/point_process.hpp"
#include "repp/svg.hpp"

namespace extremal {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using clock_type = std::chrono::steady_clock;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string numbered(const char* stem, std::size_t r, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s-%03zu.%s", stem, r, ext);
  return buf;
}

void write_file(const ExperimentConfig& cfg, const std::string& name,
                const std::string& content, std::vector<std::string>& files) {
  const fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.out);
  const fs::path p = dir / name;
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot open " + p.string());
  out << content;
  if (!out) throw IoError("write failed for " + p.string());
  files.push_back(name);
}

json context_json(const ExampleContext& ctx) {
  json j;
  j["example"] = example_name(ctx.cfg.example.id);
  j["analytic"] = {
      {"theta", ctx.summary.theta},
      {"mean_cluster_size", ctx.summary.mean_cluster},
      {"ei_equals_inverse_mean", ctx.summary.ei_equals_inverse_mean},
      {"q_default", ctx.summary.q},
  };
  if (std::isfinite(ctx.summary.gamma))
    j["analytic"]["gamma"] = ctx.summary.gamma;
  json pis = json::array();
  for (std::size_t k = 1; k <= ctx.summary.pi.p.size() && k <= 12; ++k)
    pis.push_back(ctx.summary.pi.at(k));
  j["analytic"]["pi"] = pis;
  if (ctx.is_lsv) {
    j["calibration"] = {
        {"c1", ctx.c1},
        {"b1", ctx.b1},
        {"h2", ctx.h2},
        {"zeta2", ctx.zeta2},
        {"density_exponent", ctx.density_exponent},
        {"density_exponent_model", 1.0 - ctx.cfg.example.alpha},
        {"orbit_dither", kLsvDitherScale},
    };
  }
  json thr = json::array();
  for (const auto& [n, t] : ctx.thresholds) {
    thr.push_back({{"n", n},
                   {"u", t.u},
                   {"kind", t.kind == ThresholdSchedule::Kind::Analytic
                                ? "analytic"
                                : "empirical"}});
  }
  j["thresholds"] = thr;
  return j;
}

RunOutput finalize(const ExperimentConfig& cfg, json& report,
                   std::vector<std::string>& files,
                   const clock_type::time_point& t0) {
  report["schema_version"] = 1;
  report["timing"] = {
      {"seconds",
       std::chrono::duration<double>(clock_type::now() - t0).count()}};
  RunOutput out;
  if (cfg.emits("json"))
    write_file(cfg, "report.json", report.dump(2) + "\n", files);
  out.report_json = report.dump(2);
  out.files = std::move(files);
  return out;
}

bool two_source_example(ExampleId id) {
  return id == ExampleId::DoublingMix || id == ExampleId::SmithLSV ||
         id == ExampleId::PeriodicLSV;
}

// Mirrors the scanners' exceedance cuts on a raw value; used by the thinned
// trajectory output to keep every exceedance row.
bool value_exceeds(const ExampleContext& ctx, const ScanWindows& w, double v) {
  switch (ctx.cfg.example.id) {
    case ExampleId::MMA:
      return v > w.u;
    case ExampleId::Doubling13:
      return std::fabs(v - 1.0 / 3.0) < w.r1;
    case ExampleId::DoublingMix:
      return v <= 0.5 ? std::fabs(v - 1.0 / 3.0) < w.r1
                      : std::fabs(v - 5.0 / 7.0) < w.r2;
    case ExampleId::SmithLSV:
    case ExampleId::PeriodicLSV:
      return v < w.y_cut || std::fabs(v - ctx.zeta2) < w.r2;
  }
  return false;
}

}  // namespace

RunOutput run_simulate(const ExperimentConfig& cfg) {
  const auto t0 = clock_type::now();
  const ExampleContext ctx = build_example_context(cfg);
  const std::uint64_t length = cfg.n;

  // Full dump up to this many rows per replica; beyond it, keep exceedance
  // positions plus a 1% subsample so disk usage stays desk-scale.
  constexpr std::uint64_t kFullDumpMax = 5000000;
  const bool thin = length > kFullDumpMax;
  ScanWindows win{};
  if (thin) win = scan_windows(ctx, cfg.n, cfg.tau);

  struct Slot {
    std::string csv;
    std::uint64_t rows = 0;
    double vmin = 0.0, vmax = 0.0, mean = 0.0;
  };
  std::vector<Slot> slots(cfg.replicas);
  parallel_for(cfg.replicas, cfg.workers, [&](std::size_t r) {
    Rng rng = Rng::derive(cfg.seed, r);
    const auto values = generate_values(ctx, length, rng);
    Slot s;
    std::ostringstream csv;
    csv << "# schema-version: 1\n";
    if (thin) csv << "# thinned: exceedance positions plus 1% subsample\n";
    csv << "index,value\n";
    s.vmin = values[0];
    s.vmax = values[0];
    double sum = 0.0;
    for (std::uint64_t i = 0; i < length; ++i) {
      const double v = values[i];
      s.vmin = std::min(s.vmin, v);
      s.vmax = std::max(s.vmax, v);
      sum += v;
      if (!thin || i % 100 == 0 || value_exceeds(ctx, win, v)) {
        csv << i << ',' << num(v) << '\n';
        ++s.rows;
      }
    }
    s.mean = sum / double(length);
    s.csv = csv.str();
    slots[r] = std::move(s);
  });

  json report;
  report["command"] = "simulate";
  report["config"] = json::parse(cfg.to_json());
  report["context"] = context_json(ctx);
  json series = json::array();
  for (std::size_t r = 0; r < slots.size(); ++r)
    series.push_back({{"replica", r},
                      {"length", length},
                      {"rows_written", slots[r].rows},
                      {"min", slots[r].vmin},
                      {"max", slots[r].vmax},
                      {"mean", slots[r].mean}});
  report["series"] = series;
  report["thinned"] = thin;

  std::vector<std::string> files;
  if (cfg.emits("csv"))
    for (std::size_t r = 0; r < slots.size(); ++r)
      write_file(cfg, numbered("values", r, "csv"), slots[r].csv, files);
  return finalize(cfg, report, files, t0);
}

namespace {

// Per-replica estimation record; slot-ordered so pooled results do not
// depend on thread scheduling.
struct ReplicaRecord {
  BinarySeries series;
  ClusterStats stats;
  MeanIdentity identity;
  DPrimeResult dprime;
  // Source-resolved tallies (two-peak examples).
  std::uint64_t points_by_source[2] = {0, 0};
  std::uint64_t clusters_by_source[2] = {0, 0};
  std::uint64_t cluster_points_by_source[2] = {0, 0};
};

ReplicaRecord estimate_replica(const ExampleContext& ctx, std::uint64_t n,
                               std::uint64_t q, std::uint64_t length,
                               Rng rng) {
  const auto scan = scan_example(ctx, n, ctx.cfg.tau, length, rng);
  ReplicaRecord rec;
  rec.series = hits_to_series(scan, ctx.cfg.tau);
  rec.stats = cluster_stats(rec.series, q);
  rec.identity = mean_identity_check(rec.series, q);
  if (ctx.cfg.dprime)
    rec.dprime = dprime_diagnostic(rec.series, q, n, ctx.cfg.kn_at(n));

  // Source bookkeeping; series positions are exactly the sub-tau hits.
  std::vector<std::uint8_t> src;
  src.reserve(rec.series.ones.size());
  for (const auto& h : scan.hits)
    if (h.height < ctx.cfg.tau) src.push_back(h.source);
  for (auto s : src) ++rec.points_by_source[s > 0 ? 1 : 0];
  std::size_t pos_idx = 0;
  for (const auto& c : runs_decluster(rec.series, q)) {
    while (pos_idx < rec.series.ones.size() &&
           rec.series.ones[pos_idx] < c.first)
      ++pos_idx;
    const int s = src[pos_idx] > 0 ? 1 : 0;
    if (!c.truncated) {
      ++rec.clusters_by_source[s];
      rec.cluster_points_by_source[s] += c.size;
    }
  }
  return rec;
}

json pooled_estimates(const ExampleContext& ctx,
                      const std::vector<ReplicaRecord>& recs) {
  std::uint64_t n_exceed = 0, censored = 0, classified = 0, complete = 0,
                exceed_in_complete = 0, longest = 0;
  std::vector<std::uint64_t> q_counts, h_counts;
  std::vector<double> thetas, means;
  for (const auto& r : recs) {
    n_exceed += r.stats.n_exceed;
    censored += r.stats.censored;
    classified += r.stats.classified;
    complete += r.stats.complete_clusters;
    exceed_in_complete += r.stats.exceed_in_complete;
    longest = std::max(longest, r.stats.longest_cluster);
    if (q_counts.size() < r.stats.q_counts.size())
      q_counts.resize(r.stats.q_counts.size(), 0);
    for (std::size_t k = 0; k < r.stats.q_counts.size(); ++k)
      q_counts[k] += r.stats.q_counts[k];
    if (h_counts.size() < r.stats.h_counts.size())
      h_counts.resize(r.stats.h_counts.size(), 0);
    for (std::size_t k = 0; k < r.stats.h_counts.size(); ++k)
      h_counts[k] += r.stats.h_counts[k];
    thetas.push_back(r.stats.theta_hat);
    means.push_back(r.identity.mean_cluster_size);
  }
  if (classified == 0)
    throw InsufficientDataError("estimate: no classified exceedances");

  const double theta_pooled = double(q_counts[0]) / double(classified);
  const double mean_pooled = double(exceed_in_complete) / double(complete);
  const auto theta_ms = mean_se(thetas);
  const auto mean_ms = mean_se(means);

  json j;
  j["theta_hat"] = theta_pooled;
  j["theta_se"] = theta_ms.se;
  j["theta_replica_mean"] = theta_ms.mean;
  j["mean_cluster_size"] = mean_pooled;
  j["mean_cluster_se"] = mean_ms.se;
  // Pooled finite-sample identity. Complete clusters and kappa == 0 positions
  // are the same objects, so the product stays an exact ratio of integers.
  j["identity"] = {
      {"product", theta_pooled * mean_pooled},
      {"discrepancy", std::fabs(theta_pooled * mean_pooled - 1.0)},
      {"exact", q_counts[0] == complete && exceed_in_complete == classified},
  };
  j["totals"] = {
      {"replicas", recs.size()},       {"exceedances", n_exceed},
      {"classified", classified},      {"censored", censored},
      {"complete_clusters", complete}, {"longest_cluster", longest},
  };

  json pis = json::array();
  const std::size_t cap = 64;
  std::uint64_t tail_count = 0;
  for (std::size_t k = 0; k < h_counts.size(); ++k)
    if (k >= cap) tail_count += h_counts[k];
  for (std::size_t k = 0; k < h_counts.size() && k < cap; ++k) {
    std::vector<double> reps;
    for (const auto& r : recs)
      reps.push_back(r.stats.complete_clusters == 0
                         ? 0.0
                         : (k < r.stats.pi_hat.size() ? r.stats.pi_hat[k]
                                                      : 0.0));
    const auto ms = mean_se(reps);
    pis.push_back({{"k", k + 1},
                   {"count", h_counts[k]},
                   {"pi_hat", double(h_counts[k]) / double(complete)},
                   {"se", ms.se},
                   {"analytic", ctx.summary.pi.at(k + 1)}});
  }
  if (tail_count > 0)
    pis.push_back({{"k_tail", cap + 1},
                   {"count", tail_count},
                   {"pi_hat", double(tail_count) / double(complete)}});
  j["pi"] = pis;

  if (two_source_example(ctx.cfg.example.id)) {
    std::uint64_t pts[2] = {0, 0}, cls[2] = {0, 0}, cpts[2] = {0, 0};
    for (const auto& r : recs)
      for (int s = 0; s < 2; ++s) {
        pts[s] += r.points_by_source[s];
        cls[s] += r.clusters_by_source[s];
        cpts[s] += r.cluster_points_by_source[s];
      }
    json by = json::array();
    for (int s = 0; s < 2; ++s) {
      json e = {{"source", s},
                {"points", pts[s]},
                {"complete_clusters", cls[s]}};
      if (cls[s] > 0) e["mean_cluster_size"] = double(cpts[s]) / double(cls[s]);
      by.push_back(e);
    }
    j["by_source"] = by;
  }

  if (ctx.cfg.dprime) {
    std::vector<double> ests;
    for (const auto& r : recs) ests.push_back(r.dprime.estimate);
    const auto ms = mean_se(ests);
    j["dprime"] = {{"estimate", ms.mean},
                   {"se", ms.se},
                   {"window", recs.empty() ? 0 : recs[0].dprime.window}};
  }
  return j;
}

}  // namespace

RunOutput run_estimate(const ExperimentConfig& cfg) {
  const auto t0 = clock_type::now();
  const ExampleContext ctx = build_example_context(cfg);
  const std::uint64_t n = cfg.n;
  const std::uint64_t length = cfg.series_length(n);

  std::uint64_t q = ctx.resolve_q();
  const char* q_source = cfg.q > 0 ? "config" : "default";
  json selection_json;
  if (cfg.select_q) {
    // Two scales a couple of decades apart. Pooling many replicas at the
    // small scale pushes its minimum return time down, while a single long
    // replica at the large scale keeps its minimum up; that sharpens the
    // growth test without touching the decision rule.
    std::vector<std::uint64_t> grid =
        cfg.n_grid.size() >= 2
            ? cfg.n_grid
            : std::vector<std::uint64_t>{std::max<std::uint64_t>(n / 100, 16),
                                         n};
    auto series_at = [&](std::uint64_t ni) {
      std::size_t gi = 0;
      while (gi < grid.size() && grid[gi] != ni) ++gi;
      const std::uint64_t sel_reps =
          gi + 1 == grid.size() ? 1
                                : std::min<std::uint64_t>(cfg.replicas, 8);
      std::vector<BinarySeries> out;
      for (std::uint64_t r = 0; r < sel_reps; ++r) {
        Rng rng = Rng::derive(cfg.seed, kStreamSelectQ + gi * 1024 + r);
        const auto scan =
            scan_example(ctx, ni, cfg.tau, cfg.series_length(ni), rng);
        out.push_back(hits_to_series(scan, cfg.tau));
      }
      return out;
    };
    const SelectQResult sel = select_q(series_at, grid, 8);
    q = sel.q;
    q_source = "selected";
    selection_json["q"] = sel.q;
    selection_json["n_grid"] = sel.n_grid;
    json rt = json::array();
    for (const auto& row : sel.return_time) {
      json r = json::array();
      for (auto v : row) r.push_back(v == kNoReturn ? json(nullptr) : json(v));
      rt.push_back(r);
    }
    selection_json["min_return_time"] = rt;
  }

  std::vector<ReplicaRecord> recs(cfg.replicas);
  parallel_for(cfg.replicas, cfg.workers, [&](std::size_t r) {
    recs[r] =
        estimate_replica(ctx, n, q, length, Rng::derive(cfg.seed, r));
  });
  for (std::size_t r = 0; r < recs.size(); ++r)
    if (recs[r].stats.complete_clusters < 30)
      throw InsufficientDataError(
          "estimate: replica " + std::to_string(r) + " produced only " +
          std::to_string(recs[r].stats.complete_clusters) +
          " complete clusters (need at least 30); raise sample_factor so "
          "each replica carries more exceedances, or raise tau");

  json report;
  report["command"] = "estimate";
  report["config"] = json::parse(cfg.to_json());
  report["context"] = context_json(ctx);
  report["q"] = {{"value", q}, {"source", q_source}};
  if (cfg.select_q) report["q"]["selection"] = selection_json;
  report["estimates"] = pooled_estimates(ctx, recs);

  std::vector<std::string> files;
  if (cfg.emits("csv")) {
    std::ostringstream rcsv;
    rcsv << "# schema-version: 1\n"
         << "replica,exceedances,complete_clusters,censored,theta_hat,"
            "mean_cluster_size,identity_exact\n";
    for (std::size_t r = 0; r < recs.size(); ++r) {
      const auto& s = recs[r].stats;
      rcsv << r << ',' << s.n_exceed << ',' << s.complete_clusters << ','
           << s.censored << ',' << num(s.theta_hat) << ','
           << num(recs[r].identity.mean_cluster_size) << ','
           << (recs[r].identity.exact ? 1 : 0) << '\n';
    }
    write_file(cfg, "replicas.csv", rcsv.str(), files);

    std::ostringstream pcsv;
    pcsv << "# schema-version: 1\n" << "k,count,pi_hat,se,analytic\n";
    for (const auto& row : report["estimates"]["pi"]) {
      if (!row.contains("k")) continue;
      pcsv << row["k"].get<std::uint64_t>() << ','
           << row["count"].get<std::uint64_t>() << ','
           << num(row["pi_hat"].get<double>()) << ','
           << num(row["se"].get<double>()) << ','
           << num(row["analytic"].get<double>()) << '\n';
    }
    write_file(cfg, "pi.csv", pcsv.str(), files);

    // Raw binarized series, one file per replica. Only the exceedance
    // positions are stored; omitted indices carry bit 0.
    for (std::size_t r = 0; r < recs.size(); ++r) {
      std::ostringstream bcsv;
      bcsv << "# schema-version: 1\n"
           << "# length: " << recs[r].series.length << "\n"
           << "# omitted indices carry bit 0\n"
           << "index,bit\n";
      for (std::uint64_t p : recs[r].series.ones) bcsv << p << ",1\n";
      write_file(cfg, numbered("binary", r, "csv"), bcsv.str(), files);
    }
  }
  return finalize(cfg, report, files, t0);
}

namespace {

// Per-replica point-process record.
struct ReppRecord {
  ScanResult scan;
  BinarySeries series;
  std::vector<std::uint64_t> unit_counts;
  std::vector<std::uint64_t> complete_sizes;
  bool projection_ok = false;
  // Sub-tau tallies by source (two-peak examples).
  std::uint64_t points_by_source[2] = {0, 0};
  std::uint64_t clusters_by_source[2] = {0, 0};
  std::uint64_t cluster_points_by_source[2] = {0, 0};
};

MarkedPointSet2D replica_cloud(const ReppRecord& rec, std::uint64_t n,
                               std::uint64_t length, double y_max) {
  MarkedPointSet2D cloud;
  cloud.t_max = double(length) / double(n);
  cloud.y_max = y_max;
  for (const auto& h : rec.scan.hits)
    cloud.points.push_back({double(h.pos) / double(n), h.height, h.source});
  return cloud;
}

json chi2_json(const Chi2Result& r) {
  return {{"stat", r.stat},
          {"dof", r.dof},
          {"p_value", r.p_value},
          {"cells", r.cells}};
}

}  // namespace

RunOutput run_repp(const ExperimentConfig& cfg) {
  const auto t0 = clock_type::now();
  const ExampleContext ctx = build_example_context(cfg);
  const std::uint64_t n = cfg.n;
  const std::uint64_t length = cfg.series_length(n);
  const std::uint64_t q = ctx.resolve_q();
  const double y_max = cfg.y_max_factor * cfg.tau;
  const std::uint64_t units = length / n;
  if (units == 0)
    throw ConfigError("repp: series shorter than one rescaled time unit");

  std::vector<ReppRecord> recs(cfg.replicas);
  parallel_for(cfg.replicas, cfg.workers, [&](std::size_t r) {
    ReppRecord rec;
    Rng rng = Rng::derive(cfg.seed, r);
    rec.scan = scan_example(ctx, n, y_max, length, rng);
    rec.series = hits_to_series(rec.scan, cfg.tau);
    rec.unit_counts.assign(units, 0);
    for (std::uint64_t p : rec.series.ones)
      if (p / n < units) ++rec.unit_counts[p / n];

    std::vector<std::uint8_t> src;
    src.reserve(rec.series.ones.size());
    for (const auto& h : rec.scan.hits)
      if (h.height < cfg.tau) src.push_back(h.source);
    for (auto s : src) ++rec.points_by_source[s > 0 ? 1 : 0];
    std::size_t idx = 0;
    for (const auto& c : runs_decluster(rec.series, q)) {
      while (idx < rec.series.ones.size() && rec.series.ones[idx] < c.first)
        ++idx;
      if (c.truncated) continue;
      rec.complete_sizes.push_back(c.size);
      const int s = src[idx] > 0 ? 1 : 0;
      ++rec.clusters_by_source[s];
      rec.cluster_points_by_source[s] += c.size;
    }

    // The cloud must project exactly onto the sub-tau exceedance series.
    rec.projection_ok = projection_matches(
        project_below(replica_cloud(rec, n, length, y_max), cfg.tau),
        rec.series, n);
    recs[r] = std::move(rec);
  });

  // Pooled per-unit counts against the compound Poisson law.
  CompoundPoissonSpec cp;
  cp.theta = ctx.summary.theta;
  cp.tau = cfg.tau;
  for (std::size_t k = 1; k <= ctx.summary.pi.p.size(); ++k)
    cp.size_pmf.push_back(ctx.summary.pi.at(k));
  std::vector<std::uint64_t> all_counts;
  std::vector<std::uint64_t> all_sizes;
  bool all_projections = true;
  std::uint64_t zero_units = 0, total_exceed = 0;
  for (const auto& r : recs) {
    all_counts.insert(all_counts.end(), r.unit_counts.begin(),
                      r.unit_counts.end());
    all_sizes.insert(all_sizes.end(), r.complete_sizes.begin(),
                     r.complete_sizes.end());
    all_projections = all_projections && r.projection_ok;
    total_exceed += r.series.ones.size();
    for (auto c : r.unit_counts) zero_units += c == 0;
  }
  const auto count_gof = gof_compound_counts(all_counts, cp);
  double count_mean = 0.0;
  for (auto c : all_counts) count_mean += double(c);
  count_mean /= double(all_counts.size());

  json report;
  report["command"] = "repp";
  report["config"] = json::parse(cfg.to_json());
  report["context"] = context_json(ctx);
  report["q"] = {{"value", q}};
  report["projection_consistent"] = all_projections;
  report["counts"] = {
      {"units", all_counts.size()},
      {"mean", count_mean},
      {"mean_model", cp.mean_count()},
      {"zero_fraction", double(zero_units) / double(all_counts.size())},
      {"zero_fraction_model", std::exp(-cp.intensity())},
      {"chi2", chi2_json(count_gof)},
  };
  if (!all_sizes.empty()) {
    const auto size_gof = gof_cluster_sizes(all_sizes, cp.size_pmf);
    report["cluster_sizes"] = {{"clusters", all_sizes.size()},
                               {"chi2", chi2_json(size_gof)}};
  }

  // Mass balance across the two peaks: exceedance mass split, per-source
  // cluster counts and mean sizes, and the first-peak cluster rate relative
  // to all exceedances (the quantity that decays as mass escapes).
  if (two_source_example(cfg.example.id)) {
    std::uint64_t pts[2] = {0, 0}, cls[2] = {0, 0}, cpts[2] = {0, 0};
    for (const auto& r : recs)
      for (int s = 0; s < 2; ++s) {
        pts[s] += r.points_by_source[s];
        cls[s] += r.clusters_by_source[s];
        cpts[s] += r.cluster_points_by_source[s];
      }
    json by = json::array();
    for (int s = 0; s < 2; ++s) {
      json e = {{"source", s},
                {"points", pts[s]},
                {"mass_fraction",
                 total_exceed > 0 ? double(pts[s]) / double(total_exceed)
                                  : 0.0},
                {"complete_clusters", cls[s]}};
      if (cls[s] > 0)
        e["mean_cluster_size"] = double(cpts[s]) / double(cls[s]);
      by.push_back(e);
    }
    report["mass_balance"] = {
        {"per_source", by},
        {"first_peak_cluster_ratio",
         total_exceed > 0 ? double(cls[0]) / double(total_exceed) : 0.0},
    };
  }

  // Simulated limit process. The repelling-center examples get the pile
  // cloud with their (theta, gamma); the non-recurrent intermittent example
  // gets a flat Poisson cloud with intensity theta. The remaining examples
  // have no single-pile limit form, so nothing is invented for them.
  MarkedPointSet2D limit_cloud;
  PointProcess1D limit_proj;
  bool have_limit = false;
  json limit_json;
  const ExampleId id = cfg.example.id;
  if (id == ExampleId::Doubling13 || id == ExampleId::PeriodicLSV) {
    const double gamma = ctx.summary.gamma;
    limit_cloud = simulate_limit_cloud_periodic(ctx.summary.theta, gamma,
                                                double(units), y_max,
                                                cfg.seed, kStreamAux + 65536);
    limit_proj = project_below(limit_cloud, cfg.tau);
    have_limit = true;
    limit_json["family"] = "periodic_piles";
    limit_json["theta"] = ctx.summary.theta;
    limit_json["gamma"] = gamma;
    limit_json["marks"] = limit_cloud.points.size();
    limit_json["projected_atoms"] = limit_proj.points.size();
    if (limit_proj.points.size() >= 50) {
      std::vector<std::uint64_t> mults;
      for (const auto& p : limit_proj.points) mults.push_back(p.multiplicity);
      const double succ = 1.0 - 1.0 / gamma;
      std::vector<double> pmf;
      for (int s = 1; s <= 64; ++s)
        pmf.push_back(succ * std::pow(1.0 - succ, s - 1));
      limit_json["multiplicity_chi2"] =
          chi2_json(gof_cluster_sizes(mults, pmf));
    }
  } else if (id == ExampleId::SmithLSV) {
    Rng rng = Rng::derive(cfg.seed, kStreamAux + 4096);
    limit_cloud = simulate_limit_cloud_poisson(ctx.summary.theta,
                                               double(units), y_max, rng);
    limit_proj = project_below(limit_cloud, cfg.tau);
    have_limit = true;
    std::uint64_t max_mult = 0;
    for (const auto& p : limit_proj.points)
      max_mult = std::max(max_mult, p.multiplicity);
    limit_json["family"] = "poisson";
    limit_json["intensity"] = ctx.summary.theta;
    limit_json["marks"] = limit_cloud.points.size();
    limit_json["projected_atoms"] = limit_proj.points.size();
    limit_json["max_multiplicity"] = max_mult;
  } else {
    limit_json["family"] = "none";
  }
  report["limit"] = limit_json;

  std::vector<std::string> files;
  if (cfg.emits("csv")) {
    for (std::size_t r = 0; r < recs.size(); ++r) {
      std::ostringstream ccsv;
      ccsv << "# schema-version: 1\n" << "t,y,source\n";
      for (const auto& h : recs[r].scan.hits)
        ccsv << num(double(h.pos) / double(n)) << ',' << num(h.height) << ','
             << int(h.source) << '\n';
      write_file(cfg, numbered("cloud", r, "csv"), ccsv.str(), files);

      std::ostringstream pcsv;
      pcsv << "# schema-version: 1\n" << "t,multiplicity\n";
      for (std::uint64_t p : recs[r].series.ones)
        pcsv << num(double(p) / double(n)) << ",1\n";
      write_file(cfg, numbered("projected", r, "csv"), pcsv.str(), files);
    }

    std::ostringstream ucsv;
    ucsv << "# schema-version: 1\n" << "replica,interval,count\n";
    for (std::size_t r = 0; r < recs.size(); ++r)
      for (std::size_t u = 0; u < recs[r].unit_counts.size(); ++u)
        ucsv << r << ',' << u << ',' << recs[r].unit_counts[u] << '\n';
    write_file(cfg, "counts.csv", ucsv.str(), files);

    if (have_limit) {
      std::ostringstream lcsv;
      lcsv << "# schema-version: 1\n" << "t,y,source\n";
      for (const auto& m : limit_cloud.points)
        lcsv << num(m.t) << ',' << num(m.y) << ',' << int(m.source) << '\n';
      write_file(cfg, "limit-cloud.csv", lcsv.str(), files);

      std::ostringstream lpcsv;
      lpcsv << "# schema-version: 1\n" << "t,multiplicity\n";
      for (const auto& p : limit_proj.points)
        lpcsv << num(p.t) << ',' << p.multiplicity << '\n';
      write_file(cfg, "limit-projected.csv", lpcsv.str(), files);
    }
  }
  if (cfg.emits("svg") && !recs.empty()) {
    std::error_code ec;
    fs::create_directories(fs::path(cfg.out), ec);
    if (ec) throw IoError("cannot create output directory " + cfg.out);

    const auto cloud = replica_cloud(recs[0], n, length, y_max);
    const auto proj = project_below(cloud, cfg.tau);
    SvgOptions opt;
    opt.tau = cfg.tau;
    opt.title = example_name(cfg.example.id) + " exceedance cloud (replica 0)";
    opt.caption = "example=" + example_name(cfg.example.id) +
                  "; n=" + std::to_string(n) + "; tau=" + num(cfg.tau) +
                  "; finite-n cloud; crosses mark the projection below tau";
    write_cloud_svg((fs::path(cfg.out) / "cloud.svg").string(), cloud, opt,
                    &proj);
    files.push_back("cloud.svg");

    SvgOptions popt;
    popt.title = "projected exceedance process (replica 0)";
    write_process_svg((fs::path(cfg.out) / "projected.svg").string(), proj,
                      popt);
    files.push_back("projected.svg");

    if (have_limit) {
      SvgOptions lopt;
      lopt.tau = cfg.tau;
      lopt.title = example_name(cfg.example.id) + " simulated limit cloud";
      lopt.caption =
          "example=" + example_name(cfg.example.id) +
          "; family=" + limit_json["family"].get<std::string>() +
          "; crosses mark the projection below tau, annotated with "
          "multiplicity";
      write_cloud_svg((fs::path(cfg.out) / "limit-cloud.svg").string(),
                      limit_cloud, lopt, &limit_proj);
      files.push_back("limit-cloud.svg");
    }
  }
  return finalize(cfg, report, files, t0);
}

RunOutput run_escape_mass(const ExperimentConfig& cfg) {
  const auto t0 = clock_type::now();
  if (cfg.example.id != ExampleId::SmithLSV &&
      cfg.example.id != ExampleId::PeriodicLSV)
    throw ConfigError(
        "escape-mass: needs an intermittent two-peak example "
        "(smith-lsv or periodic-lsv)");
  const ExampleContext ctx = build_example_context(cfg);
  const std::uint64_t q = ctx.resolve_q();
  const auto grid = cfg.grid();

  struct MassRow {
    std::uint64_t points = 0, neutral_points = 0, neutral_clusters = 0;
    double freq = 0.0;  // neutral clusters per unit of rescaled time
  };
  std::vector<std::vector<MassRow>> rows(grid.size());
  for (auto& v : rows) v.resize(cfg.replicas);

  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const std::uint64_t ni = grid[gi];
    const std::uint64_t length = cfg.series_length(ni);
    parallel_for(cfg.replicas, cfg.workers, [&, gi, ni, length](std::size_t r) {
      Rng rng = Rng::derive(cfg.seed, gi * 1000003 + r);
      const auto scan = scan_example(ctx, ni, cfg.tau, length, rng);
      const BinarySeries series = hits_to_series(scan, cfg.tau);
      MassRow row;
      std::vector<std::uint8_t> src;
      for (const auto& h : scan.hits)
        if (h.height < cfg.tau) src.push_back(h.source);
      row.points = series.ones.size();
      for (auto s : src) row.neutral_points += s == 0;
      std::size_t idx = 0;
      for (const auto& c : runs_decluster(series, q)) {
        while (idx < series.ones.size() && series.ones[idx] < c.first) ++idx;
        if (src[idx] == 0) ++row.neutral_clusters;
      }
      row.freq = double(row.neutral_clusters) * double(ni) / double(length);
      rows[gi][r] = row;
    });
  }

  json per_n = json::array();
  std::vector<double> log_n, log_freq;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    std::uint64_t pts = 0, npts = 0, ncl = 0;
    std::vector<double> fracs, freqs;
    for (const auto& row : rows[gi]) {
      pts += row.points;
      npts += row.neutral_points;
      ncl += row.neutral_clusters;
      if (row.points > 0)
        fracs.push_back(double(row.neutral_points) / double(row.points));
      freqs.push_back(row.freq);
    }
    const auto frac_ms = mean_se(fracs);
    const auto freq_ms = mean_se(freqs);
    per_n.push_back({{"n", grid[gi]},
                     {"points", pts},
                     {"neutral_mass_fraction", double(npts) / double(pts)},
                     {"neutral_mass_fraction_se", frac_ms.se},
                     {"neutral_clusters", ncl},
                     {"neutral_cluster_freq", freq_ms.mean},
                     {"neutral_cluster_freq_se", freq_ms.se}});
    if (freq_ms.mean > 0.0) {
      log_n.push_back(std::log(double(grid[gi])));
      log_freq.push_back(std::log(freq_ms.mean));
    }
  }

  json report;
  report["command"] = "escape-mass";
  report["config"] = json::parse(cfg.to_json());
  report["context"] = context_json(ctx);
  report["q"] = {{"value", q}};
  report["per_n"] = per_n;
  report["mass_fraction_model"] = 0.5;
  const double a = cfg.example.alpha;
  report["freq_slope_model"] = -a / (1.0 - a);
  if (log_n.size() >= 2) {
    const auto fit = linear_fit(log_n, log_freq);
    report["freq_slope"] = fit.slope;
  }

  std::vector<std::string> files;
  if (cfg.emits("csv")) {
    std::ostringstream mcsv;
    mcsv << "# schema-version: 1\n"
         << "n,replica,points,neutral_points,neutral_clusters,cluster_freq\n";
    for (std::size_t gi = 0; gi < grid.size(); ++gi)
      for (std::size_t r = 0; r < rows[gi].size(); ++r) {
        const auto& row = rows[gi][r];
        mcsv << grid[gi] << ',' << r << ',' << row.points << ','
             << row.neutral_points << ',' << row.neutral_clusters << ','
             << num(row.freq) << '\n';
      }
    write_file(cfg, "mass.csv", mcsv.str(), files);
  }
  return finalize(cfg, report, files, t0);
}

std::string analytic_table_json(const ExperimentConfig& cfg, int kappa_max) {
  cfg.validate();
  const std::uint64_t K = std::uint64_t(std::max(kappa_max, 1));

  json j;
  j["schema_version"] = 1;
  j["command"] = "analytic";

  // One row per worked example; the intermittent entries take alpha (and the
  // orbit period) from the config.
  json rows = json::array();
  for (const auto id :
       {ExampleId::MMA, ExampleId::Doubling13, ExampleId::DoublingMix,
        ExampleId::SmithLSV, ExampleId::PeriodicLSV}) {
    ExampleSpec ex = cfg.example;
    ex.id = id;
    const auto s = analytic_summary(ex, K);
    json e;
    e["example"] = example_name(id);
    if (id == ExampleId::SmithLSV || id == ExampleId::PeriodicLSV)
      e["alpha"] = ex.alpha;
    if (id == ExampleId::PeriodicLSV) e["p"] = ex.p;
    e["theta"] = s.theta;
    e["mean_cluster_size"] = s.mean_cluster;
    e["inv_theta"] = 1.0 / s.theta;
    e["ei_equals_inverse_mean"] = s.ei_equals_inverse_mean;
    e["q_default"] = s.q;
    if (std::isfinite(s.gamma)) e["gamma"] = s.gamma;
    json pis = json::array();
    for (std::size_t k = 1; k <= s.pi.p.size(); ++k)
      pis.push_back({{"k", k}, {"pi", s.pi.at(k)}});
    e["pi"] = pis;
    const auto ft = finite_theta_asymptotics(ex);
    e["finite_size"] = {{"theta_limit", ft.theta_limit},
                        {"exponent", ft.exponent}};
    rows.push_back(e);
  }
  j["examples"] = rows;

  // Extra detail at the configured (example, n, tau).
  json d;
  d["example"] = example_name(cfg.example.id);
  d["threshold"] = {{"n", cfg.n},
                    {"tau", cfg.tau},
                    {"u", threshold_analytic(cfg.example, cfg.tau, cfg.n).u}};
  if (cfg.example.id == ExampleId::Doubling13 ||
      cfg.example.id == ExampleId::DoublingMix) {
    const auto s = analytic_summary(cfg.example, K);
    json qk = json::array();
    for (std::uint64_t k = 0; k <= 3; ++k)
      qk.push_back({{"kappa", k},
                    {"measure", Qk_measure_doubling(cfg.example.id, k, cfg.tau,
                                                    cfg.n, s.q)}});
    d["Q_kappa_measure"] = qk;
  }
  j["detail"] = d;
  return j.dump(2);
}

}  // namespace extremal
