// Copyright 2026 The TinyIDS Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the tinyids core: opaque handles, status codes.
 *
 * Every function returning tids_status leaves a message retrievable with
 * tids_last_error() on failure. Strings returned through char** are owned by
 * the caller and released with tids_string_free(). Handles are released with
 * their *_free function; passing NULL to a *_free function is a no-op.
 */
#ifndef TINYIDS_H
#define TINYIDS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TINYIDS_BUILDING)
#    define TIDS_API __declspec(dllexport)
#  else
#    define TIDS_API __declspec(dllimport)
#  endif
#else
#  define TIDS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define TIDS_FEATURE_COUNT 9
#define TIDS_MODEL_BUDGET_BYTES 26624

typedef enum tids_status {
  TIDS_OK = 0,
  TIDS_E_INVALID_ARGUMENT = 1,
  TIDS_E_IO = 2,
  TIDS_E_CONFIG = 3,
  TIDS_E_DATA = 4,
  TIDS_E_TRAINING = 5,
  TIDS_E_VERIFY = 6,
  TIDS_E_INTERNAL = 7
} tids_status;

TIDS_API const char* tids_version(void);
/* Message for the last failure on the calling thread ("" if none). */
TIDS_API const char* tids_last_error(void);
TIDS_API const char* tids_status_name(tids_status status);
/* Process exit code for a status: 0 ok, 2 config, 3 data (including bad
 * arguments and unreadable files), 4 training, 5 verification, 1 internal. */
TIDS_API int tids_exit_code(tids_status status);
TIDS_API void tids_string_free(char* s);

/* ---- configuration ---------------------------------------------------- */

typedef struct tids_config tids_config;

TIDS_API tids_status tids_config_default(tids_config** out);
TIDS_API tids_status tids_config_load(const char* path, tids_config** out);
TIDS_API tids_status tids_config_set_seed(tids_config* cfg, uint64_t seed);
TIDS_API tids_status tids_config_set_output_dir(tids_config* cfg, const char* dir);
/* Harness driver used by verification; NULL or "" disables it. */
TIDS_API tids_status tids_config_set_driver(tids_config* cfg, const char* driver_source);
TIDS_API tids_status tids_config_output_dir(const tids_config* cfg, char** out);
TIDS_API tids_status tids_config_to_json(const tids_config* cfg, char** out_json);
TIDS_API void tids_config_free(tids_config* cfg);

/* ---- capture records -------------------------------------------------- */

typedef struct tids_records tids_records;

/* Generates the configured scenario. anomalous_fraction may be NULL. */
TIDS_API tids_status tids_records_synthesize(const tids_config* cfg, tids_records** out,
                                             double* anomalous_fraction);
/* Netdump text log. Bad lines are counted, not fatal. issues may be NULL. */
TIDS_API tids_status tids_records_parse_log(const char* path, tids_records** out,
                                            size_t* issues);
/* Dataset CSV; "<path>.ticks" is loaded too when it exists. */
TIDS_API tids_status tids_records_read_csv(const char* path, tids_records** out);
TIDS_API tids_status tids_records_write_csv(const tids_records* recs, const char* path,
                                            int with_ticks);
/* "f0,...,f8,label". Fails with TIDS_E_DATA on unlabeled records. */
TIDS_API tids_status tids_records_write_encoded(const tids_records* recs, const char* path);
TIDS_API tids_status tids_records_anonymize(tids_records* recs);
TIDS_API size_t tids_records_count(const tids_records* recs);
TIDS_API tids_status tids_records_label_counts(const tids_records* recs, size_t* legit,
                                               size_t* anomalous, size_t* unlabeled);
/* Netdump line of one record. */
TIDS_API tids_status tids_records_line(const tids_records* recs, size_t index, char** out);
/* label: 0 legit, 1 anomalous, -1 unlabeled. */
TIDS_API tids_status tids_records_features(const tids_records* recs, size_t index,
                                           float fv[TIDS_FEATURE_COUNT], int* label);
/* Stratified split driven by the config's holdout fraction and seed. */
TIDS_API tids_status tids_records_split(const tids_records* recs, const tids_config* cfg,
                                        tids_records** train, tids_records** holdout);
TIDS_API void tids_records_free(tids_records* recs);

/* ---- metrics ------------------------------------------------------------ */

typedef struct tids_metrics {
  uint64_t tp, fp, tn, fn;
  double precision, recall, f1, accuracy;
} tids_metrics;

/* ---- decision tree ------------------------------------------------------ */

typedef struct tids_tree tids_tree;

TIDS_API tids_status tids_tree_fit(const tids_records* train, const tids_config* cfg,
                                   tids_tree** out);
TIDS_API tids_status tids_tree_load(const char* json_path, tids_tree** out);
TIDS_API tids_status tids_tree_save(const tids_tree* tree, const char* json_path);
TIDS_API tids_status tids_tree_predict(const tids_tree* tree,
                                       const float fv[TIDS_FEATURE_COUNT], int* cls,
                                       float* score);
TIDS_API tids_status tids_tree_evaluate(const tids_tree* tree, const tids_records* recs,
                                        tids_metrics* out);
/* Writes tids_model.c source; bytes may be NULL. */
TIDS_API tids_status tids_tree_emit_source(const tids_tree* tree, const char* c_path,
                                           size_t* bytes);
TIDS_API size_t tids_tree_node_count(const tids_tree* tree);
TIDS_API size_t tids_tree_estimated_source_bytes(const tids_tree* tree);
TIDS_API void tids_tree_free(tids_tree* tree);

/* ---- multilayer perceptron --------------------------------------------- */

typedef struct tids_mlp tids_mlp;

/* holdout may be NULL (empty curve column); curve_csv_path may be NULL. */
TIDS_API tids_status tids_mlp_train(const tids_records* train, const tids_records* holdout,
                                    const tids_config* cfg, tids_mlp** out,
                                    const char* curve_csv_path);
TIDS_API tids_status tids_mlp_load(const char* bin_path, tids_mlp** out);
TIDS_API tids_status tids_mlp_save(const tids_mlp* mlp, const char* bin_path, size_t* bytes);
TIDS_API tids_status tids_mlp_predict(const tids_mlp* mlp,
                                      const float fv[TIDS_FEATURE_COUNT], int* cls,
                                      float* score);
TIDS_API tids_status tids_mlp_evaluate(const tids_mlp* mlp, const tids_records* recs,
                                       tids_metrics* out);
TIDS_API tids_status tids_mlp_emit_source(const tids_mlp* mlp, const char* c_path,
                                          size_t* bytes);
TIDS_API size_t tids_mlp_parameter_count(const tids_mlp* mlp);
TIDS_API void tids_mlp_free(tids_mlp* mlp);

/* ---- power -------------------------------------------------------------- */

typedef struct tids_power_summary {
  double hours;
  double energy_wh;
  double avg_current_a;
  double battery_ah;
} tids_power_summary;

/* Reads a "mode,duration_h" trace and sizes a battery with the config's
 * power profile and battery parameters. */
TIDS_API tids_status tids_power_from_trace_csv(const char* path, const tids_config* cfg,
                                               tids_power_summary* out);

/* ---- cross-language verification --------------------------------------- */

typedef struct tids_verify_result {
  int skipped;
  int passed;
  size_t rows;
  size_t class_mismatches;
  double max_score_diff;
} tids_verify_result;

/* Builds the config's harness driver against source_path, replays the seeded
 * probe vectors and compares. report_json (may be NULL) receives details.
 * A missing driver yields skipped = 1 and TIDS_OK. */
TIDS_API tids_status tids_verify_tree(const tids_tree* tree, const char* source_path,
                                      const tids_config* cfg, const char* work_dir,
                                      tids_verify_result* out, char** report_json);
TIDS_API tids_status tids_verify_mlp(const tids_mlp* mlp, const char* source_path,
                                     const tids_config* cfg, const char* work_dir,
                                     tids_verify_result* out, char** report_json);

/* ---- pipeline ----------------------------------------------------------- */

/* Runs every stage into the configured output directory. report_json and
 * verify_failed may be NULL. */
TIDS_API tids_status tids_pipeline_run(const tids_config* cfg, char** report_json,
                                       int* verify_failed);

#ifdef __cplusplus
}
#endif

#endif /* TINYIDS_H */
