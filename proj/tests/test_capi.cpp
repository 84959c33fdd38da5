#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include "extremal/extremal.h"

namespace {

// Owns a context for the duration of one test case.
struct CtxGuard {
  exi_ctx* ctx = exi_ctx_new();
  ~CtxGuard() { exi_ctx_free(ctx); }
};

std::string take(char* s) {
  REQUIRE(s != nullptr);
  std::string out(s);
  exi_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("context lifecycle and error reporting") {
  CtxGuard g;
  REQUIRE(g.ctx != nullptr);
  CHECK(std::strlen(exi_last_error(g.ctx)) == 0);

  CHECK(exi_load_config_text(g.ctx, "not = a = config") == EXI_ERR_CONFIG);
  CHECK(std::strlen(exi_last_error(g.ctx)) > 0);
  CHECK(exi_load_config_text(g.ctx, "example = doubling13\n") == EXI_OK);
  CHECK(std::strlen(exi_last_error(g.ctx)) == 0);

  CHECK(exi_load_config_file(g.ctx, "/no/such/file") == EXI_ERR_CONFIG);
  CHECK(exi_set_workers(g.ctx, -2) == EXI_ERR_CONFIG);
  CHECK(exi_set_emit(g.ctx, "csv,pdf") == EXI_ERR_CONFIG);
  CHECK(exi_set_emit(g.ctx, "none") == EXI_OK);
  CHECK(exi_set_seed(g.ctx, 17) == EXI_OK);
}

TEST_CASE("config json echoes overrides and round trips") {
  CtxGuard g;
  REQUIRE(exi_load_config_text(g.ctx, "example = mma\nn = 4000\n") == EXI_OK);
  REQUIRE(exi_set_seed(g.ctx, 321) == EXI_OK);
  char* cj = nullptr;
  REQUIRE(exi_config_json(g.ctx, &cj) == EXI_OK);
  const std::string text = take(cj);
  CHECK(text.find("\"example\": \"mma\"") != std::string::npos);
  CHECK(text.find("\"seed\": 321") != std::string::npos);
  // The echoed config is itself loadable.
  CHECK(exi_load_config_text(g.ctx, text.c_str()) == EXI_OK);
}

TEST_CASE("analytic table through the C surface") {
  CtxGuard g;
  char* tj = nullptr;
  REQUIRE(exi_analytic_table(g.ctx, &tj) == EXI_OK);
  const std::string table = take(tj);
  for (const char* name :
       {"mma", "doubling13", "doubling-mix", "smith-lsv", "periodic-lsv"})
    CHECK(table.find(name) != std::string::npos);
  CHECK(table.find("ei_equals_inverse_mean") != std::string::npos);
}

TEST_CASE("estimate runs end to end and maps data starvation to status 3") {
  CtxGuard g;
  REQUIRE(exi_load_config_text(g.ctx,
                               "example = doubling13\n"
                               "n = 10000\n"
                               "replicas = 2\n"
                               "sample_factor = 250\n"
                               "emit = none\n") == EXI_OK);
  REQUIRE(exi_set_seed(g.ctx, 99) == EXI_OK);
  char* rj = nullptr;
  REQUIRE(exi_run_estimate(g.ctx, &rj) == EXI_OK);
  const std::string report = take(rj);
  CHECK(report.find("\"theta_hat\"") != std::string::npos);
  CHECK(report.find("\"command\": \"estimate\"") != std::string::npos);

  // Starve the replicas: too few exceedances per replica.
  REQUIRE(exi_load_config_text(g.ctx,
                               "example = doubling13\n"
                               "n = 10000\n"
                               "replicas = 1\n"
                               "sample_factor = 15\n"
                               "emit = none\n") == EXI_OK);
  char* rj2 = reinterpret_cast<char*>(0x1);
  CHECK(exi_run_estimate(g.ctx, &rj2) == EXI_ERR_INSUFFICIENT_DATA);
  CHECK(rj2 == nullptr);  // cleared on failure
  CHECK(std::strlen(exi_last_error(g.ctx)) > 0);
}

TEST_CASE("null context and null arguments fail cleanly") {
  CHECK(exi_load_config_text(nullptr, "x = 1") == EXI_ERR_CONFIG);
  CHECK(exi_run_estimate(nullptr, nullptr) == EXI_ERR_CONFIG);
  CtxGuard g;
  CHECK(exi_load_config_text(g.ctx, nullptr) == EXI_ERR_CONFIG);
  CHECK(exi_set_out_dir(g.ctx, "") == EXI_ERR_CONFIG);
  exi_string_free(nullptr);  // must be a no-op
}
