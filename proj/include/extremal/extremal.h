#ifndef EXTREMAL_EXTREMAL_H
#define EXTREMAL_EXTREMAL_H

/* C interface to the extremal-index estimation library.
 *
 * Usage: create a context, load a configuration (JSON object or `key =
 * value` lines), optionally override seed / workers / output directory /
 * emit formats, then invoke one of the run functions. Runs write their
 * artifacts under the configured output directory and hand back the JSON
 * report as a heap string owned by the caller (release with
 * exi_string_free). All functions are thread-compatible: distinct contexts
 * may run concurrently, a single context must not. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Nonzero values double as process exit codes for the CLI. */
typedef enum exi_status {
  EXI_OK = 0,
  EXI_ERR_CONFIG = 2,            /* bad configuration or unusable input */
  EXI_ERR_INSUFFICIENT_DATA = 3, /* too few exceedances or clusters */
  EXI_ERR_NUMERIC = 4            /* calibration or solver failure */
} exi_status;

typedef struct exi_ctx exi_ctx;

/* Fresh context holding the built-in default configuration. Returns NULL
 * only on allocation failure. */
exi_ctx* exi_ctx_new(void);
void exi_ctx_free(exi_ctx* ctx);

/* Message for the most recent failed call on this context; empty string if
 * the last call succeeded. Owned by the context, valid until the next call. */
const char* exi_last_error(const exi_ctx* ctx);

/* Replace the configuration from text (JSON object or key = value lines)
 * or from a file holding such text. Validates before accepting. */
exi_status exi_load_config_text(exi_ctx* ctx, const char* text);
exi_status exi_load_config_file(exi_ctx* ctx, const char* path);

/* Field overrides applied on top of the loaded configuration. `emit` is a
 * comma-separated subset of csv,json,svg or the word none. */
exi_status exi_set_seed(exi_ctx* ctx, uint64_t seed);
exi_status exi_set_workers(exi_ctx* ctx, int workers);
exi_status exi_set_out_dir(exi_ctx* ctx, const char* path);
exi_status exi_set_emit(exi_ctx* ctx, const char* emit);

/* Resolved configuration as a JSON object (round-trippable through
 * exi_load_config_text). Caller owns *config_json. */
exi_status exi_config_json(exi_ctx* ctx, char** config_json);

/* Commands. On success, when report_json is non-NULL, *report_json receives
 * the run report; caller owns it. On failure *report_json is set to NULL and
 * exi_last_error describes the problem. */
exi_status exi_run_simulate(exi_ctx* ctx, char** report_json);
exi_status exi_run_estimate(exi_ctx* ctx, char** report_json);
exi_status exi_run_repp(exi_ctx* ctx, char** report_json);
exi_status exi_run_escape_mass(exi_ctx* ctx, char** report_json);

/* Closed-form reference table for all worked examples (no simulation). */
exi_status exi_analytic_table(exi_ctx* ctx, char** table_json);

/* The full acceptance battery; `full_scale` nonzero runs publication sizes,
 * zero runs the reduced sizes meant for routine checks. One line per
 * criterion goes to stdout. *failures (when non-NULL) receives the number of
 * failed criteria; the call itself returns EXI_OK whenever the battery ran.
 * `mutate_oracle` nonzero corrupts one reference value on purpose, so a
 * healthy build must then report at least one failure. */
exi_status exi_selftest(uint64_t seed, int workers, int full_scale,
                        int mutate_oracle, int* failures);

/* Release a string returned through any char** out-parameter. */
void exi_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* EXTREMAL_EXTREMAL_H */
