/* C interface to the market simulation engine.
 *
 * Every function returning int uses the shared status codes:
 *   0  success
 *   2  bad input (scenario text, option values, malformed files)
 *   3  internal engine failure
 *   4  property violation (a stability check found a counterexample)
 *
 * Strings returned through char** are heap-allocated; release them with
 * mcs_free_string. mcs_engine_last_error stays valid until the next call
 * on the same engine.
 */
#ifndef MCSMARKET_H
#define MCSMARKET_H

#ifdef __cplusplus
extern "C" {
#endif

#define MCS_OK 0
#define MCS_ERR_INPUT 2
#define MCS_ERR_ENGINE 3
#define MCS_ERR_PROPERTY 4

typedef struct mcs_engine mcs_engine;

/* Engine construction: default scenario, or a flat key=value scenario file. */
int mcs_engine_create_default(mcs_engine** out);
int mcs_engine_create_from_file(const char* scenario_path, mcs_engine** out);
void mcs_engine_destroy(mcs_engine* engine);

/* Overrides one scenario key (same keys as the scenario file). */
int mcs_engine_set_option(mcs_engine* engine, const char* key, const char* value);

/* Samples a market and writes tasks.csv / workers.csv / pairs.csv to dir. */
int mcs_engine_generate_market(mcs_engine* engine, unsigned long long seed, const char* out_dir);

/* Builds a market from a trip-record CSV and writes the same bundle. */
int mcs_engine_ingest_trips(mcs_engine* engine, const char* csv_path, const char* out_dir);

/* Runs the Monte Carlo experiment. Any output pointer may be NULL. */
int mcs_engine_run(mcs_engine* engine, char** trials_csv, char** aggregate_json,
                   char** summary_text);

/* One experiment per grid value of parameter (overbooking_rate,
 * risk_tolerance, n_workers, or n_tasks). */
int mcs_engine_sweep(mcs_engine* engine, const char* parameter, const double* grid, int grid_len,
                     char** sweep_json, char** summary_text);

/* Certifies `instances` random small markets against the exhaustive
 * blocking-deviation search. Returns MCS_ERR_PROPERTY when any witness is
 * found; the report lists witnesses verbatim. inject_fault != 0 corrupts one
 * payment on purpose (self-test). */
int mcs_engine_check_stability(mcs_engine* engine, int instances, unsigned long long seed,
                               int max_tasks, int max_workers, int inject_fault,
                               char** report_text);

const char* mcs_engine_last_error(const mcs_engine* engine);
const char* mcs_version(void);
void mcs_free_string(char* s);

#ifdef __cplusplus
}
#endif

#endif
