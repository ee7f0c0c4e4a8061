/* SPDX-License-Identifier: Apache-2.0 */
#ifndef CKMBEAM_CKMBEAM_H
#define CKMBEAM_CKMBEAM_H

#include <stddef.h>
#include <stdint.h>

#if defined(CKMB_BUILDING_LIBRARY)
#define CKMB_API __attribute__((visibility("default")))
#else
#define CKMB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ckmb_status {
  CKMB_OK = 0,
  CKMB_INVALID_ARGUMENT = 1,
  CKMB_OUT_OF_RANGE = 2,
  CKMB_FORMAT_ERROR = 3,
  CKMB_IO_ERROR = 4,
  CKMB_DEGENERATE = 5,
  CKMB_INTERNAL = 6
} ckmb_status;

typedef struct ckmb_scenario ckmb_scenario;
typedef struct ckmb_map ckmb_map;
typedef struct ckmb_results ckmb_results;

/* Message of the last failing call on this thread ("" if none). */
CKMB_API const char* ckmb_last_error(void);
CKMB_API const char* ckmb_version(void);

/* Scenario. */
CKMB_API ckmb_status ckmb_scenario_load(const char* path, ckmb_scenario** out);
CKMB_API ckmb_status ckmb_scenario_parse(const char* json_text, ckmb_scenario** out);
CKMB_API void ckmb_scenario_free(ckmb_scenario* scenario);
CKMB_API ckmb_status ckmb_scenario_num_antennas(const ckmb_scenario* scenario, int* out);
CKMB_API ckmb_status ckmb_scenario_num_users(const ckmb_scenario* scenario, int* out);

/* Channel knowledge map. */
CKMB_API ckmb_status ckmb_map_build(const ckmb_scenario* scenario, ckmb_map** out);
CKMB_API ckmb_status ckmb_map_load(const char* path, ckmb_map** out);
CKMB_API ckmb_status ckmb_map_save(const ckmb_map* map, const char* path);
CKMB_API void ckmb_map_free(ckmb_map* map);
CKMB_API ckmb_status ckmb_map_lookup_gain(const ckmb_map* map, double x, double y, int layer,
                                          int index, double* out);

/* Trial runs. Null/zero-length arguments keep the scenario's values; a
 * negative trial count or worker count does the same. Algorithms are a
 * comma-separated tag list. */
typedef struct ckmb_run_options {
  int trials;
  int workers;
  int has_seed;
  uint64_t seed;
  const double* snr_db;
  size_t snr_count;
  const char* algorithms;
} ckmb_run_options;

CKMB_API void ckmb_run_options_init(ckmb_run_options* options);
CKMB_API ckmb_status ckmb_run(const ckmb_scenario* scenario, const ckmb_map* map,
                              const ckmb_run_options* options, ckmb_results** out);
CKMB_API ckmb_status ckmb_results_read(const char* path, ckmb_results** out);
CKMB_API void ckmb_results_free(ckmb_results* results);
CKMB_API size_t ckmb_results_count(const ckmb_results* results);

typedef struct ckmb_row {
  int trial_id;
  const char* algorithm;
  double snr_db;
  int user_id;
  int overhead;
  int chosen_layer;
  int chosen_index;
  int oracle_layer;
  int oracle_index;
  double gain_ratio_db;
  double se_bps_hz;
} ckmb_row;

CKMB_API ckmb_status ckmb_results_row(const ckmb_results* results, size_t i, ckmb_row* out);
CKMB_API ckmb_status ckmb_results_write_csv(const ckmb_results* results, const char* path);

/* Writes the long-format summary. `cdf` is a comma list drawn from
 * "overhead" and "gain" (null or "" for none). */
CKMB_API ckmb_status ckmb_summarize_csv(const ckmb_results* results, const char* cdf,
                                        const char* path);

#ifdef __cplusplus
}
#endif

#endif
