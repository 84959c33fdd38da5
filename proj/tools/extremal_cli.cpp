// Command-line front end. Everything goes through the C API; this file must
// not include library internals.
#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "extremal/extremal.h"

namespace {

struct CommonOpts {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  int workers = -1;
  std::string emit;
  bool have_seed = false;
  bool have_out = false;
  bool have_workers = false;
  bool have_emit = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config,
                  "configuration file (JSON object or key = value lines)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "master seed override")
      ->each([&](const std::string&) { o.have_seed = true; });
  cmd->add_option("--out", o.out, "output directory override")
      ->each([&](const std::string&) { o.have_out = true; });
  cmd->add_option("--workers", o.workers,
                  "worker threads override (0 = hardware)")
      ->each([&](const std::string&) { o.have_workers = true; });
  cmd->add_option("--emit", o.emit,
                  "comma-separated outputs: csv,json,svg (or none)")
      ->each([&](const std::string&) { o.have_emit = true; });
}

int fail(exi_ctx* ctx, exi_status st) {
  std::fprintf(stderr, "error: %s\n", exi_last_error(ctx));
  exi_ctx_free(ctx);
  return int(st);
}

using RunFn = exi_status (*)(exi_ctx*, char**);

int run_with(const CommonOpts& o, RunFn fn) {
  exi_ctx* ctx = exi_ctx_new();
  if (!ctx) {
    std::fprintf(stderr, "error: out of memory\n");
    return int(EXI_ERR_NUMERIC);
  }
  exi_status st = EXI_OK;
  if (!o.config.empty())
    if ((st = exi_load_config_file(ctx, o.config.c_str())) != EXI_OK)
      return fail(ctx, st);
  if (o.have_seed && (st = exi_set_seed(ctx, o.seed)) != EXI_OK)
    return fail(ctx, st);
  if (o.have_workers && (st = exi_set_workers(ctx, o.workers)) != EXI_OK)
    return fail(ctx, st);
  if (o.have_out && (st = exi_set_out_dir(ctx, o.out.c_str())) != EXI_OK)
    return fail(ctx, st);
  if (o.have_emit && (st = exi_set_emit(ctx, o.emit.c_str())) != EXI_OK)
    return fail(ctx, st);

  char* report = nullptr;
  st = fn(ctx, &report);
  if (st != EXI_OK) return fail(ctx, st);
  if (report) {
    std::fputs(report, stdout);
    std::fputc('\n', stdout);
    exi_string_free(report);
  }
  exi_ctx_free(ctx);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extremal: cluster statistics of dynamically defined extremes"};
  app.require_subcommand(1);

  CommonOpts sim_o, est_o, ana_o, repp_o, mass_o;
  CLI::App* sim = app.add_subcommand(
      "simulate", "generate process trajectories, one CSV per replica");
  add_common(sim, sim_o);
  CLI::App* est = app.add_subcommand(
      "estimate", "extremal index and cluster-size estimation with replicas");
  add_common(est, est_o);
  CLI::App* ana = app.add_subcommand(
      "analytic", "closed-form reference table for the worked examples");
  add_common(ana, ana_o);
  CLI::App* repp = app.add_subcommand(
      "repp", "rescaled exceedance point processes and their limits");
  add_common(repp, repp_o);
  CLI::App* mass = app.add_subcommand(
      "escape-mass", "neutral-peak mass split and cluster-frequency decay");
  add_common(mass, mass_o);

  CLI::App* self = app.add_subcommand(
      "selftest", "run the acceptance battery; exit 0 iff all criteria pass");
  std::string scale = "reduced";
  std::uint64_t self_seed = 20260815;
  int self_workers = 0;
  bool mutate = false;
  self->add_option("--scale", scale, "criterion sizes: reduced or full")
      ->check(CLI::IsMember({"reduced", "full"}));
  self->add_option("--seed", self_seed, "master seed");
  self->add_option("--workers", self_workers,
                   "worker threads (0 = hardware)");
  self->add_flag("--mutate-oracle", mutate,
                 "corrupt one reference value; selftest must then fail");

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) return run_with(sim_o, &exi_run_simulate);
  if (est->parsed()) return run_with(est_o, &exi_run_estimate);
  if (ana->parsed()) return run_with(ana_o, &exi_analytic_table);
  if (repp->parsed()) return run_with(repp_o, &exi_run_repp);
  if (mass->parsed()) return run_with(mass_o, &exi_run_escape_mass);
  if (self->parsed()) {
    int failures = 0;
    const exi_status st = exi_selftest(self_seed, self_workers,
                                       scale == "full" ? 1 : 0,
                                       mutate ? 1 : 0, &failures);
    if (st != EXI_OK) return int(st);
    return failures > 0 ? 1 : 0;
  }
  return int(EXI_ERR_CONFIG);
}
