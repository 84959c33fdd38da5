#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "clustering/cluster.hpp"
#include "core/errors.hpp"
#include "core/rng.hpp"
#include "report/config.hpp"
#include "report/driver.hpp"
#include "report/examples.hpp"
#include "report/scan.hpp"

using namespace extremal;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path("test_out") / name;
  fs::remove_all(dir);
  return dir;
}

json without_timing(const std::string& report) {
  json j = json::parse(report);
  j.erase("timing");
  return j;
}

}  // namespace

TEST_SUITE_BEGIN("report");

TEST_CASE("config: key = value text, JSON round trip, rejections") {
  const char* text =
      "# comment\n"
      "example = doubling-mix\n"
      "n = 50000\n"
      "tau = 1.5   # trailing comment\n"
      "replicas = 7\n"
      "emit = csv,json\n"
      "n_grid = 1000,10000\n";
  const auto cfg = ExperimentConfig::parse(text);
  CHECK(cfg.example.id == ExampleId::DoublingMix);
  CHECK(cfg.n == 50000);
  CHECK(cfg.tau == 1.5);
  CHECK(cfg.replicas == 7);
  REQUIRE(cfg.n_grid.size() == 2);
  CHECK(cfg.n_grid[1] == 10000);

  // to_json -> parse -> to_json is a fixed point.
  const std::string j1 = cfg.to_json();
  const auto cfg2 = ExperimentConfig::parse(j1);
  CHECK(cfg2.to_json() == j1);

  CHECK_THROWS_AS(ExperimentConfig::parse("example = nope\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("bogus_key = 3\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("emit = pdf\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("tau = -1\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("n = 0\n"), ConfigError);
  CHECK_THROWS_AS(
      ExperimentConfig::parse("example = smith-lsv\nalpha = 0.5\n"),
      ConfigError);
}

TEST_CASE("scan frequency calibration: sub-tau hits arrive at rate tau per n") {
  ExperimentConfig cfg;
  cfg.example.id = ExampleId::Doubling13;
  cfg.n = 10000;
  cfg.tau = 2.0;
  cfg.seed = 31;
  const ExampleContext ctx = build_example_context(cfg);
  const std::uint64_t length = 2000000;
  Rng rng = Rng::derive(cfg.seed, 0);
  const auto scan = scan_example(ctx, cfg.n, cfg.tau, length, rng);
  REQUIRE(scan.length == length);
  std::uint64_t below = 0;
  std::uint64_t last_pos = 0;
  bool first = true;
  for (const auto& h : scan.hits) {
    CHECK(h.height < cfg.tau);
    CHECK(h.height >= 0.0);
    if (!first) CHECK(h.pos > last_pos);
    last_pos = h.pos;
    first = false;
    below += h.height < cfg.tau;
  }
  const double expected = double(length) * cfg.tau / double(cfg.n);
  CHECK(std::fabs(double(below) - expected) <= 4.0 * std::sqrt(expected));
  // hits_to_series keeps exactly the sub-tau positions.
  const auto b = hits_to_series(scan, cfg.tau);
  CHECK(b.length == length);
  CHECK(b.ones.size() == below);
}

TEST_CASE("empirical threshold context tracks the analytic tail") {
  ExperimentConfig cfg;
  cfg.example.id = ExampleId::MMA;
  cfg.n = 10000;
  cfg.tau = 2.0;
  cfg.threshold = ThresholdKind::Empirical;
  cfg.calib_samples = 4000000;
  cfg.seed = 99;
  const ExampleContext ctx = build_example_context(cfg);
  const double u = ctx.threshold_at(cfg.n).u;
  // P(X > u) = 1 - u^2 for the moving maximum; the empirical quantile must
  // reproduce the target tail mass tau/n.
  const double tail = 1.0 - u * u;
  CHECK(std::fabs(tail / (cfg.tau / double(cfg.n)) - 1.0) < 0.15);
  CHECK(ctx.threshold_at(cfg.n).kind == ThresholdSchedule::Kind::Empirical);
}

TEST_CASE("runs and blocks declusterings agree on the size law") {
  ExperimentConfig cfg;
  cfg.example.id = ExampleId::Doubling13;
  cfg.n = 100000;
  cfg.tau = 1.0;
  cfg.sample_factor = 500.0;
  cfg.seed = 12;
  const ExampleContext ctx = build_example_context(cfg);
  const std::uint64_t length = cfg.series_length(cfg.n);
  Rng rng = Rng::derive(cfg.seed, 0);
  const auto scan = scan_example(ctx, cfg.n, cfg.tau, length, rng);
  const auto b = hits_to_series(scan, cfg.tau);

  std::vector<std::uint64_t> runs_sizes;
  for (const auto& c : runs_decluster(b, 2))
    if (!c.truncated) runs_sizes.push_back(c.size);
  // Blocks of about sqrt(n) steps: long enough to hold a cluster, short
  // enough that two clusters rarely share a block.
  const std::uint64_t k_n =
      std::uint64_t(double(length) / std::sqrt(double(cfg.n)));
  std::vector<std::uint64_t> block_sizes;
  for (const auto& c : blocks_decluster(b, k_n)) block_sizes.push_back(c.size);

  REQUIRE(runs_sizes.size() > 200);
  REQUIRE(block_sizes.size() > 200);
  std::vector<double> p(8, 0.0), q(8, 0.0);
  for (auto s : runs_sizes) p[std::min<std::uint64_t>(s, 8) - 1] += 1.0;
  for (auto s : block_sizes) q[std::min<std::uint64_t>(s, 8) - 1] += 1.0;
  double tv = 0.0;
  for (int k = 0; k < 8; ++k)
    tv += std::fabs(p[k] / double(runs_sizes.size()) -
                    q[k] / double(block_sizes.size()));
  tv *= 0.5;
  CHECK(tv < 0.10);
}

TEST_CASE("simulate: deterministic per-seed, row counts, worker invariance") {
  ExperimentConfig cfg;
  cfg.example.id = ExampleId::Doubling13;
  cfg.n = 2000;
  cfg.tau = 1.0;
  cfg.replicas = 2;
  cfg.seed = 2026;
  cfg.out = fresh_dir("sim_a").string();
  const auto a = run_simulate(cfg);
  cfg.out = fresh_dir("sim_b").string();
  cfg.workers = 2;
  const auto b = run_simulate(cfg);

  const json ja = json::parse(a.report_json);
  CHECK(ja["command"] == "simulate");
  CHECK(ja["thinned"] == false);
  REQUIRE(ja["series"].size() == 2);
  CHECK(ja["series"][0]["rows_written"] == 2000);

  for (const char* name : {"values-000.csv", "values-001.csv"}) {
    const auto ca = slurp(fs::path("test_out/sim_a") / name);
    const auto cb = slurp(fs::path("test_out/sim_b") / name);
    CHECK(ca == cb);
    CHECK(ca.rfind("# schema-version: 1\n", 0) == 0);
    CHECK(ca.find("index,value\n") != std::string::npos);
  }
  json ja2 = without_timing(a.report_json);
  json jb2 = without_timing(b.report_json);
  // The echoed config legitimately differs in out/workers; the data may not.
  for (json* j : {&ja2, &jb2}) {
    (*j)["config"].erase("out");
    (*j)["config"].erase("workers");
  }
  CHECK(ja2 == jb2);
  // A different seed must change the data.
  cfg.seed = 2027;
  cfg.out = fresh_dir("sim_c").string();
  run_simulate(cfg);
  CHECK(slurp("test_out/sim_a/values-000.csv") !=
        slurp("test_out/sim_c/values-000.csv"));
}

TEST_CASE("simulate: long series switch to exceedance + subsample thinning") {
  ExperimentConfig cfg;
  cfg.example.id = ExampleId::MMA;
  cfg.n = 6000000;
  cfg.tau = 1.0;
  cfg.replicas = 1;
  cfg.seed = 5;
  cfg.emit = {"json"};
  cfg.out = fresh_dir("sim_thin").string();
  const auto out = run_simulate(cfg);
  const json j = json::parse(out.report_json);
  CHECK(j["thinned"] == true);
  const std::uint64_t rows = j["series"][0]["rows_written"];
  CHECK(rows >= cfg.n / 100);
  CHECK(rows < cfg.n / 50);
  // emit = json only: no CSV files on disk, just the report.
  CHECK_FALSE(fs::exists("test_out/sim_thin/values-000.csv"));
  CHECK(fs::exists("test_out/sim_thin/report.json"));
}

TEST_CASE("estimate: pooled report, identity, files, worker invariance") {
  ExperimentConfig cfg;
  cfg.example.id = ExampleId::Doubling13;
  cfg.n = 20000;
  cfg.tau = 1.0;
  cfg.replicas = 3;
  cfg.sample_factor = 300.0;
  cfg.seed = 4242;
  cfg.out = fresh_dir("est_a").string();
  const auto a = run_estimate(cfg);
  const json ja = json::parse(a.report_json);

  CHECK(ja["q"]["value"] == 2);
  CHECK(ja["q"]["source"] == "default");
  const double theta = ja["estimates"]["theta_hat"];
  CHECK(theta > 0.65);
  CHECK(theta < 0.85);
  CHECK(ja["estimates"]["identity"]["exact"] == true);
  CHECK(double(ja["estimates"]["identity"]["product"]) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ja["estimates"]["totals"]["replicas"] == 3);
  // The resolved config inside the report parses back losslessly.
  const auto echoed = ExperimentConfig::parse(ja["config"].dump());
  CHECK(echoed.to_json() == cfg.to_json());

  for (const char* name : {"replicas.csv", "pi.csv", "binary-000.csv",
                           "binary-002.csv", "report.json"}) {
    CHECK(fs::exists(fs::path("test_out/est_a") / name));
  }
  const auto bcsv = slurp("test_out/est_a/binary-000.csv");
  CHECK(bcsv.rfind("# schema-version: 1\n", 0) == 0);
  CHECK(bcsv.find("# length: " + std::to_string(cfg.series_length(cfg.n))) !=
        std::string::npos);
  CHECK(bcsv.find("index,bit\n") != std::string::npos);

  cfg.out = fresh_dir("est_b").string();
  cfg.workers = 2;
  const auto b = run_estimate(cfg);
  json jb = without_timing(b.report_json);
  json jaa = without_timing(a.report_json);
  // Reports agree except for the output directory recorded in the config.
  jb["config"].erase("out");
  jb["config"].erase("workers");
  jaa["config"].erase("out");
  jaa["config"].erase("workers");
  CHECK(jaa == jb);
}

TEST_CASE("estimate: starved replicas raise the insufficient-data error") {
  ExperimentConfig cfg;
  cfg.example.id = ExampleId::Doubling13;
  cfg.n = 20000;
  cfg.tau = 1.0;
  cfg.replicas = 2;
  cfg.sample_factor = 20.0;  // ~20 exceedances, ~15 complete clusters
  cfg.seed = 7;
  cfg.emit = {"none"};
  CHECK_THROWS_AS(run_estimate(cfg), InsufficientDataError);
  CHECK_THROWS_WITH_AS(run_estimate(cfg),
                       doctest::Contains("raise sample_factor"),
                       InsufficientDataError);
}

TEST_CASE("estimate: data-driven q selection lands on the example default") {
  ExperimentConfig cfg;
  cfg.example.id = ExampleId::Doubling13;
  cfg.n = 20000;
  cfg.tau = 1.0;
  cfg.replicas = 2;
  cfg.sample_factor = 300.0;
  cfg.select_q = true;
  cfg.seed = 1001;
  cfg.emit = {"none"};
  const auto out = run_estimate(cfg);
  const json j = json::parse(out.report_json);
  CHECK(j["q"]["value"] == 2);
  CHECK(j["q"]["source"] == "selected");
  CHECK(j["q"]["selection"]["n_grid"].size() == 2);
}

TEST_CASE("repp: projection consistency, count law, limit cloud, files") {
  ExperimentConfig cfg;
  cfg.example.id = ExampleId::Doubling13;
  cfg.n = 5000;
  cfg.tau = 1.0;
  cfg.replicas = 2;
  cfg.sample_factor = 100.0;
  cfg.y_max_factor = 5.0;
  cfg.seed = 33;
  cfg.emit = {"csv", "json", "svg"};
  cfg.out = fresh_dir("repp").string();
  const auto out = run_repp(cfg);
  const json j = json::parse(out.report_json);

  CHECK(j["projection_consistent"] == true);
  CHECK(j["counts"]["units"] == 200);
  CHECK(double(j["counts"]["chi2"]["p_value"]) > 0.001);
  CHECK(double(j["counts"]["mean_model"]) == doctest::Approx(1.0));
  CHECK(j["limit"]["family"] == "periodic_piles");
  CHECK(double(j["limit"]["gamma"]) == doctest::Approx(4.0));

  for (const char* name :
       {"cloud-000.csv", "cloud-001.csv", "projected-000.csv", "counts.csv",
        "limit-cloud.csv", "limit-projected.csv", "cloud.svg",
        "projected.svg", "limit-cloud.svg", "report.json"}) {
    CHECK(fs::exists(fs::path("test_out/repp") / name));
  }
  const auto ccsv = slurp("test_out/repp/cloud-000.csv");
  CHECK(ccsv.find("t,y,source\n") != std::string::npos);
  const auto pcsv = slurp("test_out/repp/projected-000.csv");
  CHECK(pcsv.find("t,multiplicity\n") != std::string::npos);
  const auto svg = slurp("test_out/repp/cloud.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("caption:") != std::string::npos);
}

TEST_CASE("escape-mass: split near a half and a recorded frequency slope") {
  ExperimentConfig cfg;
  cfg.example.id = ExampleId::SmithLSV;
  cfg.example.alpha = 0.2;
  cfg.n = 20000;
  cfg.n_grid = {2000, 20000};
  cfg.tau = 1.0;
  cfg.replicas = 2;
  cfg.sample_factor = 200.0;
  cfg.seed = 88;
  cfg.emit = {"csv", "json"};
  cfg.out = fresh_dir("mass").string();
  const auto out = run_escape_mass(cfg);
  const json j = json::parse(out.report_json);
  REQUIRE(j["per_n"].size() == 2);
  for (const auto& row : j["per_n"]) {
    const double frac = row["neutral_mass_fraction"];
    CHECK(frac > 0.25);
    CHECK(frac < 0.75);
  }
  CHECK(j.contains("freq_slope"));
  CHECK(double(j["freq_slope_model"]) == doctest::Approx(-0.25));
  CHECK(fs::exists("test_out/mass/mass.csv"));

  // Single-peak examples are refused.
  cfg.example.id = ExampleId::MMA;
  CHECK_THROWS_AS(run_escape_mass(cfg), ConfigError);
}

TEST_CASE("analytic table covers all five examples with their invariants") {
  ExperimentConfig cfg;
  cfg.example.id = ExampleId::Doubling13;
  cfg.n = 100000;
  cfg.tau = 1.0;
  const json j = json::parse(analytic_table_json(cfg));
  REQUIRE(j["examples"].size() == 5);
  double mma_theta = -1.0;
  for (const auto& e : j["examples"]) {
    const double theta = e["theta"];
    const double mean = e["mean_cluster_size"];
    if (e["example"] == "mma") {
      mma_theta = theta;
      CHECK(e["ei_equals_inverse_mean"] == true);
    }
    if (e["example"] == "smith-lsv") {
      CHECK(e["ei_equals_inverse_mean"] == false);
      // The identity fails by exactly the escaped half of the mass.
      CHECK(1.0 / theta == doctest::Approx(2.0 * mean).epsilon(1e-12));
    }
    if (e["example"] == "doubling13")
      CHECK(double(e["gamma"]) == doctest::Approx(4.0));
  }
  CHECK(mma_theta == doctest::Approx(0.5));
  CHECK(double(j["detail"]["threshold"]["u"]) ==
        doctest::Approx(std::log(2.0 * 100000.0)));
  REQUIRE(j["detail"]["Q_kappa_measure"].size() == 4);
}

TEST_SUITE_END();
