/* Copyright 2026 The sbcert Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the sbcert certification engine.
 *
 * All functions return an sbcert_status. On failure a message is available
 * from sbcert_last_error() until the next failing call on the same thread.
 * Strings returned through char** outputs belong to the caller and are
 * released with sbcert_string_free().
 */

#ifndef SBCERT_SBCERT_H_
#define SBCERT_SBCERT_H_

#include <stdint.h>

#if defined(_WIN32)
#define SBCERT_API __declspec(dllexport)
#else
#define SBCERT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sbcert_status {
  SBCERT_OK = 0,
  SBCERT_ERR_INVALID_ARGUMENT = 1,
  SBCERT_ERR_DIMENSION_MISMATCH = 2,
  SBCERT_ERR_INVALID_STATE = 3,
  SBCERT_ERR_LEFT_SUBSPACE = 4,
  SBCERT_ERR_PRECONDITION = 5,
  SBCERT_ERR_NUMERICAL = 6,
  SBCERT_ERR_CONFIG = 7,
  SBCERT_ERR_CSV = 8,
  SBCERT_ERR_INTERNAL = 99
} sbcert_status;

/* Verdict of a run that produced a report. */
enum {
  SBCERT_VERDICT_OK = 0,       /* certificate fires, checks passed */
  SBCERT_VERDICT_NEGATIVE = 2  /* vacuous or invalid certificate, failed check */
};

typedef struct sbcert_experiment sbcert_experiment;

SBCERT_API const char* sbcert_version(void);
SBCERT_API const char* sbcert_last_error(void);
SBCERT_API void sbcert_string_free(char* text);

/* Parses and validates a JSON experiment config. */
SBCERT_API sbcert_status sbcert_experiment_from_json(const char* config_json, sbcert_experiment** out);
SBCERT_API void sbcert_experiment_free(sbcert_experiment* experiment);

SBCERT_API sbcert_status sbcert_experiment_set_seed(sbcert_experiment* experiment, uint64_t seed);
SBCERT_API sbcert_status sbcert_experiment_set_shots(sbcert_experiment* experiment, uint64_t shots);
/* "point" or "conservative". */
SBCERT_API sbcert_status sbcert_experiment_set_policy(sbcert_experiment* experiment, const char* policy);
/* Soundness trials for sbcert_verify. */
SBCERT_API sbcert_status sbcert_experiment_set_trials(sbcert_experiment* experiment, uint64_t trials);
/* Nonzero omits timestamps from reports. */
SBCERT_API sbcert_status sbcert_experiment_set_deterministic(sbcert_experiment* experiment, int deterministic);
/* Resolved config with every default filled in. */
SBCERT_API sbcert_status sbcert_experiment_to_json(const sbcert_experiment* experiment, char** config_json);
/* Output path from the config, "" when unset. Valid while the handle lives. */
SBCERT_API const char* sbcert_experiment_output_path(const sbcert_experiment* experiment);

/* Simulated count table as CSV. */
SBCERT_API sbcert_status sbcert_simulate_csv(const sbcert_experiment* experiment, char** csv);
/* Certificate JSON from `counts_csv`, or from inline statistics when NULL. */
SBCERT_API sbcert_status sbcert_certify(const sbcert_experiment* experiment, const char* counts_csv,
                                        char** report_json, int* verdict);
SBCERT_API sbcert_status sbcert_scan_times(const sbcert_experiment* experiment, char** report_json, int* verdict);
SBCERT_API sbcert_status sbcert_verify(const sbcert_experiment* experiment, char** report_json, int* verdict);
SBCERT_API sbcert_status sbcert_pathology(const sbcert_experiment* experiment, char** report_json, int* verdict);

#ifdef __cplusplus
}
#endif

#endif /* SBCERT_SBCERT_H_ */
