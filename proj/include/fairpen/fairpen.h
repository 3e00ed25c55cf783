/*
 * Copyright 2026 The fairpen Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to libfairpen: penalized fair logistic regression for multiple,
 * possibly overlapping groups.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns fp_status; on failure fp_last_error() returns a
 * message for the calling thread, valid until that thread's next call.
 * Strings returned through char** are heap-allocated and released with
 * fp_string_free. Configuration is passed as JSON text using the same
 * blocks as the command-line run configuration ("data", "solver", "search",
 * "simulation"); NULL selects the defaults.
 */

#ifndef FAIRPEN_FAIRPEN_H_
#define FAIRPEN_FAIRPEN_H_

#include <stddef.h>

#if defined(_WIN32)
#  if defined(FAIRPEN_BUILDING_LIBRARY)
#    define FP_API __declspec(dllexport)
#  else
#    define FP_API __declspec(dllimport)
#  endif
#else
#  define FP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fp_status {
  FP_OK = 0,
  FP_ERR_INVALID_ARGUMENT = 1,
  FP_ERR_IO = 2,
  FP_ERR_DATA = 3,
  FP_ERR_UNDEFINED_METRIC = 4,
  FP_ERR_CONVERGENCE = 5,
  FP_ERR_SEPARATION = 6,
  FP_ERR_CONFIG = 7,
  FP_ERR_INTERNAL = 8
} fp_status;

typedef struct fp_dataset fp_dataset;
typedef struct fp_model fp_model;
typedef struct fp_search fp_search;
typedef struct fp_simulation fp_simulation;

FP_API const char* fp_version(void);
FP_API const char* fp_last_error(void);
FP_API void fp_string_free(char* s);

/* Parses one configuration block ("data", "solver", "search" or
 * "simulation") and returns it re-serialized with every default filled in. */
FP_API fp_status fp_config_effective(const char* block, const char* json, char** out);

/* ---- datasets ---------------------------------------------------------- */

/* `data_json` is a "data" block: path, outcome, features, groups, reference. */
FP_API fp_status fp_dataset_load_csv(const char* data_json, fp_dataset** out);

/* Row-major features (n x p) and group indicators (n x num_groups). A NULL
 * `reference` makes the reference group the rows in no group. */
FP_API fp_status fp_dataset_create(size_t n, size_t p, size_t num_groups,
                                   const double* features, const unsigned char* outcomes,
                                   const unsigned char* groups, const unsigned char* reference,
                                   const char* const* feature_names,
                                   const char* const* group_names, fp_dataset** out);

/* Draws one simulated dataset from a "simulation" block (setting or c, n, seed). */
FP_API fp_status fp_dataset_generate(const char* simulation_json, fp_dataset** out);

FP_API fp_status fp_dataset_drop_feature(const fp_dataset* d, const char* name, fp_dataset** out);
FP_API fp_status fp_dataset_write_csv(const fp_dataset* d, const char* path);
FP_API size_t fp_dataset_rows(const fp_dataset* d);
FP_API size_t fp_dataset_cols(const fp_dataset* d);
FP_API size_t fp_dataset_groups(const fp_dataset* d);
FP_API void fp_dataset_free(fp_dataset* d);

/* ---- fitting ----------------------------------------------------------- */

/* Fits through the weighted-classification reduction. */
FP_API fp_status fp_fit_reduction(const fp_dataset* d, const double* lambdas, size_t num_lambdas,
                                  const char* solver_json, double threshold, fp_model** out);

/* Minimizes the penalized loss directly (reference solver). */
FP_API fp_status fp_fit_direct(const fp_dataset* d, const double* lambdas, size_t num_lambdas,
                               const char* solver_json, double threshold, fp_model** out);

/* CSV with columns row,W,Y_prime,C1,C0. */
FP_API fp_status fp_reduction_audit_csv(const fp_dataset* d, const double* lambdas,
                                        size_t num_lambdas, char** out);

/* ---- models ------------------------------------------------------------ */

FP_API fp_status fp_model_from_json(const char* json, fp_model** out);
FP_API fp_status fp_model_to_json(const fp_model* m, char** out);
FP_API fp_status fp_model_set_threshold(fp_model* m, double threshold);
FP_API size_t fp_model_num_features(const fp_model* m);

/* Writes fp_dataset_rows(d) probabilities into `out`. */
FP_API fp_status fp_model_predict_proba(const fp_model* m, const fp_dataset* d, double* out,
                                        size_t capacity);

/* Fairness report as JSON and as an aligned text table. Either output
 * pointer may be NULL. */
FP_API fp_status fp_model_evaluate(const fp_model* m, const fp_dataset* d, char** report_json,
                                   char** report_table);
FP_API void fp_model_free(fp_model* m);

/* ---- penalty-weight search --------------------------------------------- */

/* `threshold` applies to every score variant. Output is identical for any
 * `threads` >= 1. */
FP_API fp_status fp_search_run(const fp_dataset* d, const char* search_json,
                               const char* solver_json, double threshold, int threads,
                               fp_search** out);
FP_API fp_status fp_search_to_json(const fp_search* s, char** out);
FP_API size_t fp_search_variant_count(const fp_search* s);
FP_API fp_status fp_search_variant_name(const fp_search* s, size_t variant, char** out);
FP_API fp_status fp_search_variant_model(const fp_search* s, size_t variant, fp_model** out);
FP_API fp_status fp_search_baseline_model(const fp_search* s, fp_model** out);
FP_API void fp_search_free(fp_search* s);

/* ---- simulation study -------------------------------------------------- */

FP_API fp_status fp_simulation_run(const char* simulation_json, const char* search_json,
                                   const char* solver_json, double threshold, int threads,
                                   fp_simulation** out);
FP_API size_t fp_simulation_replication_count(const fp_simulation* s);
/* One compact JSON document (no trailing newline). */
FP_API fp_status fp_simulation_replication_json(const fp_simulation* s, size_t replication,
                                                char** out);
FP_API fp_status fp_simulation_summary_csv(const fp_simulation* s, char** out);
FP_API fp_status fp_simulation_frontier_csv(const fp_simulation* s, char** out);
FP_API void fp_simulation_free(fp_simulation* s);

#ifdef __cplusplus
}
#endif

#endif /* FAIRPEN_FAIRPEN_H_ */
