/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 *
 * C API of libbeetle: bellwether discovery and transfer for configurable
 * software systems. All handles are opaque; every fallible call returns a
 * beetle_status and, on failure, copies a message into the caller's error
 * buffer (always NUL-terminated when err_cap > 0). Strings returned through
 * char** out-parameters are heap-allocated; release them with
 * beetle_string_free().
 */
#ifndef BEETLE_BEETLE_H_
#define BEETLE_BEETLE_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum beetle_status {
  BEETLE_OK = 0,
  BEETLE_E_VALIDATION = 1, /* bad inputs: files, schemas, parameters */
  BEETLE_E_RUNTIME = 2     /* runtime or numerical failure */
} beetle_status;

typedef struct beetle_community beetle_community;
typedef struct beetle_discovery beetle_discovery;

const char* beetle_version(void);
void beetle_string_free(char* text);

/* ---------- community ingestion and canonical output ---------- */

beetle_status beetle_community_load(const char* manifest_path, beetle_community** out,
                                    char* err, size_t err_cap);
void beetle_community_free(beetle_community* community);

int32_t beetle_community_source_count(const beetle_community* community);
int32_t beetle_community_target_count(const beetle_community* community);
int32_t beetle_community_option_count(const beetle_community* community);
/* group: 0 = sources, 1 = targets. Returns NULL when out of range. */
const char* beetle_community_env_name(const beetle_community* community, int32_t group,
                                      int32_t index);
/* Rows of one environment; -1 when the name is unknown. */
int64_t beetle_community_row_count(const beetle_community* community, const char* env_name);

beetle_status beetle_community_save(const beetle_community* community, const char* out_dir,
                                    char* err, size_t err_cap);

/* ---------- synthetic community generation ---------- */

typedef struct beetle_synth_options {
  int32_t n_sources;       /* candidate environments, >= 2 */
  int32_t n_targets;       /* group-2 environments */
  int32_t n_binary_options;
  int32_t rows_per_env;
  uint64_t seed;
} beetle_synth_options;

void beetle_synth_options_init(beetle_synth_options* options);

/* Writes manifest.json plus one CSV per environment into out_dir. */
beetle_status beetle_generate(const beetle_synth_options* options, const char* out_dir,
                              char* err, size_t err_cap);

/* ---------- racing discovery ---------- */

typedef struct beetle_racing_options {
  double initial_fraction;    /* default 0.10 */
  double fraction_step;       /* default 0.10 */
  int64_t budget;             /* total measurements; 0 = all source rows */
  int32_t lives;              /* default 5 */
  int32_t repeats_per_round;  /* default 5 */
  int32_t min_samples_leaf;   /* default 2 */
  int32_t max_depth;          /* -1 = unlimited */
  int32_t bootstrap_resamples; /* default 1000 */
  double confidence;          /* default 0.95 */
  double effect_threshold;    /* default 0.6 */
} beetle_racing_options;

void beetle_racing_options_init(beetle_racing_options* options);

beetle_status beetle_discover(const beetle_community* community,
                              const beetle_racing_options* options, uint64_t seed,
                              beetle_discovery** out, char* err, size_t err_cap);
void beetle_discovery_free(beetle_discovery* discovery);

int32_t beetle_discovery_bellwether_count(const beetle_discovery* discovery);
const char* beetle_discovery_bellwether_name(const beetle_discovery* discovery, int32_t index);
int64_t beetle_discovery_cost(const beetle_discovery* discovery);
int32_t beetle_discovery_round_count(const beetle_discovery* discovery);
/* "lives_exhausted" | "budget_exhausted" | "no_more_eliminations" */
const char* beetle_discovery_termination(const beetle_discovery* discovery);
/* Percent of all source rows consumed by the race. */
double beetle_discovery_percent_rows(const beetle_discovery* discovery,
                                     const beetle_community* community);

beetle_status beetle_discovery_report(const beetle_discovery* discovery, char** out_text,
                                      char* err, size_t err_cap);
beetle_status beetle_discovery_write_csv(const beetle_discovery* discovery, const char* path,
                                         char* err, size_t err_cap);

/* ---------- transfer ---------- */

/*
 * Predicts the best configuration for target environment(s) from a
 * bellwether. Exactly one of `discovery` (its rank-1 group; seeded random
 * pick among ties) or `bellwether` (an explicit environment name) must be
 * given. target_env = NULL runs every group-2 target. The rendered result
 * table is returned through out_text.
 */
beetle_status beetle_transfer(const beetle_community* community,
                              const beetle_discovery* discovery, const char* bellwether,
                              const char* target_env, uint64_t seed, char** out_text,
                              char* err, size_t err_cap);

/* ---------- experiment protocols ---------- */

typedef struct beetle_experiment_options {
  int32_t repeats; /* default 30 */
  uint64_t seed;
  beetle_racing_options racing;
} beetle_experiment_options;

void beetle_experiment_options_init(beetle_experiment_options* options);

/* Each writes its result CSV(s) under out_dir (rq1.csv, rq2.csv, rq3.csv,
 * rq4.csv + rq4_cost.csv) and returns the rendered table text. */
beetle_status beetle_run_rq1(const beetle_community* community,
                             const beetle_experiment_options* options, const char* out_dir,
                             char** out_text, char* err, size_t err_cap);
beetle_status beetle_run_rq2(const beetle_community* community,
                             const beetle_experiment_options* options, const char* out_dir,
                             char** out_text, char* err, size_t err_cap);
beetle_status beetle_run_rq3(const beetle_community* community,
                             const beetle_experiment_options* options, const char* out_dir,
                             char** out_text, char* err, size_t err_cap);
beetle_status beetle_run_rq4(const beetle_community* community,
                             const beetle_experiment_options* options, const char* out_dir,
                             char** out_text, char* err, size_t err_cap);

/* ---------- reports ---------- */

/* Renders a result CSV as an aligned-text table. */
beetle_status beetle_render_csv(const char* csv_path, char** out_text, char* err,
                                size_t err_cap);

#ifdef __cplusplus
}
#endif

#endif /* BEETLE_BEETLE_H_ */
