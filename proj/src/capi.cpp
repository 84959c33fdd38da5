#include "extremal/extremal.h"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <new>
#include <sstream>
#include <string>

#include "core/errors.hpp"
#include "report/acceptance.hpp"
#include "report/config.hpp"
#include "report/driver.hpp"

// The context owns a validated configuration plus the last error message.
struct exi_ctx {
  extremal::ExperimentConfig cfg;
  std::string last_error;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

exi_status status_of(const std::exception& e) {
  if (dynamic_cast<const extremal::InsufficientDataError*>(&e))
    return EXI_ERR_INSUFFICIENT_DATA;
  if (dynamic_cast<const extremal::NumericError*>(&e)) return EXI_ERR_NUMERIC;
  // ConfigError, IoError, parse errors from the JSON layer, anything else.
  return EXI_ERR_CONFIG;
}

// Runs `fn` under the context's error capture; translates exceptions to
// status codes and stores their message for exi_last_error.
template <typename Fn>
exi_status guarded(exi_ctx* ctx, Fn&& fn) {
  if (!ctx) return EXI_ERR_CONFIG;
  ctx->last_error.clear();
  try {
    fn();
    return EXI_OK;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return status_of(e);
  } catch (...) {
    ctx->last_error = "unknown error";
    return EXI_ERR_NUMERIC;
  }
}

using RunFn = extremal::RunOutput (*)(const extremal::ExperimentConfig&);

exi_status run_command(exi_ctx* ctx, RunFn fn, char** report_json) {
  if (report_json) *report_json = nullptr;
  return guarded(ctx, [&] {
    const auto out = fn(ctx->cfg);
    if (report_json) *report_json = dup_string(out.report_json);
  });
}

}  // namespace

extern "C" {

exi_ctx* exi_ctx_new(void) { return new (std::nothrow) exi_ctx; }

void exi_ctx_free(exi_ctx* ctx) { delete ctx; }

const char* exi_last_error(const exi_ctx* ctx) {
  return ctx ? ctx->last_error.c_str() : "null context";
}

exi_status exi_load_config_text(exi_ctx* ctx, const char* text) {
  return guarded(ctx, [&] {
    if (!text) throw extremal::ConfigError("config text is null");
    auto cfg = extremal::ExperimentConfig::parse(text);
    cfg.validate();
    ctx->cfg = std::move(cfg);
  });
}

exi_status exi_load_config_file(exi_ctx* ctx, const char* path) {
  return guarded(ctx, [&] {
    if (!path) throw extremal::ConfigError("config path is null");
    auto cfg = extremal::ExperimentConfig::load(path);
    cfg.validate();
    ctx->cfg = std::move(cfg);
  });
}

exi_status exi_set_seed(exi_ctx* ctx, uint64_t seed) {
  return guarded(ctx, [&] { ctx->cfg.seed = seed; });
}

exi_status exi_set_workers(exi_ctx* ctx, int workers) {
  return guarded(ctx, [&] {
    if (workers < 0)
      throw extremal::ConfigError("workers must be >= 0 (0 = hardware)");
    ctx->cfg.workers = workers;
  });
}

exi_status exi_set_out_dir(exi_ctx* ctx, const char* path) {
  return guarded(ctx, [&] {
    if (!path || !*path)
      throw extremal::ConfigError("output directory is empty");
    ctx->cfg.out = path;
  });
}

exi_status exi_set_emit(exi_ctx* ctx, const char* emit) {
  return guarded(ctx, [&] {
    if (!emit) throw extremal::ConfigError("emit list is null");
    std::vector<std::string> parts;
    std::stringstream ss(emit);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) parts.push_back(item);
    auto cfg = ctx->cfg;
    cfg.emit = std::move(parts);
    cfg.validate();
    ctx->cfg = std::move(cfg);
  });
}

exi_status exi_config_json(exi_ctx* ctx, char** config_json) {
  if (config_json) *config_json = nullptr;
  return guarded(ctx, [&] {
    if (config_json) *config_json = dup_string(ctx->cfg.to_json());
  });
}

exi_status exi_run_simulate(exi_ctx* ctx, char** report_json) {
  return run_command(ctx, &extremal::run_simulate, report_json);
}

exi_status exi_run_estimate(exi_ctx* ctx, char** report_json) {
  return run_command(ctx, &extremal::run_estimate, report_json);
}

exi_status exi_run_repp(exi_ctx* ctx, char** report_json) {
  return run_command(ctx, &extremal::run_repp, report_json);
}

exi_status exi_run_escape_mass(exi_ctx* ctx, char** report_json) {
  return run_command(ctx, &extremal::run_escape_mass, report_json);
}

exi_status exi_analytic_table(exi_ctx* ctx, char** table_json) {
  if (table_json) *table_json = nullptr;
  return guarded(ctx, [&] {
    const std::string t = extremal::analytic_table_json(ctx->cfg);
    if (table_json) *table_json = dup_string(t);
  });
}

exi_status exi_selftest(uint64_t seed, int workers, int full_scale,
                        int mutate_oracle, int* failures) {
  if (failures) *failures = -1;
  try {
    extremal::AcceptanceOptions opt;
    opt.full = full_scale != 0;
    opt.seed = seed;
    opt.workers = workers;
    opt.mutate_oracle = mutate_oracle != 0;
    const auto results = extremal::run_acceptance(opt, &std::cout);
    int bad = 0;
    for (const auto& r : results) bad += r.pass ? 0 : 1;
    if (failures) *failures = bad;
    return EXI_OK;
  } catch (const std::exception& e) {
    std::cerr << "selftest: " << e.what() << "\n";
    return status_of(e);
  }
}

void exi_string_free(char* s) { std::free(s); }

}  // extern "C"
