// Copyright 2026 The jcpulse Authors
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

/* C interface to jcpulse. All objects are opaque handles released with the
 * matching *_destroy function (NULL is accepted). Functions return a
 * jcp_status; on failure jcp_last_error() describes the problem for the
 * calling thread and jcp_last_error_field() names the offending config
 * field when there is one. Durations are in units of T_g = 2 pi / g_max. */

#ifndef JCPULSE_JCPULSE_H_
#define JCPULSE_JCPULSE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(__GNUC__)
#define JCP_API __attribute__((visibility("default")))
#else
#define JCP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum jcp_status {
  JCP_OK = 0,
  JCP_ERR_INVALID_ARGUMENT = 1, /* null pointer, bad index or shape */
  JCP_ERR_CONFIG = 2,           /* invalid configuration or input data */
  JCP_ERR_DOMAIN = 3,           /* precondition violated */
  JCP_ERR_RUNTIME = 4           /* I/O or internal failure */
} jcp_status;

typedef struct jcp_space jcp_space;
typedef struct jcp_sequence jcp_sequence;
typedef struct jcp_matrix jcp_matrix;

typedef struct jcp_error_report {
  double raw_error;
  double eta;
  double fidelity;
  double optimal_phase;
} jcp_error_report;

typedef struct jcp_run_options {
  uint64_t seed;
  int has_seed; /* nonzero: seed overrides the config's "seed" */
  int jobs;
  const char* cache_dir; /* V-gate cache directory, NULL for none */
} jcp_run_options;

JCP_API const char* jcp_version(void);
JCP_API const char* jcp_last_error(void);
JCP_API const char* jcp_last_error_field(void);
/* Summary line of the last jcp_run_command on this thread. */
JCP_API const char* jcp_last_message(void);
JCP_API void jcp_string_free(char* s);

/* Oscillator space with computational ceiling n_comp. The custom variant
 * takes the padding, optimization and check truncations explicitly. */
JCP_API jcp_status jcp_space_create(int n_comp, jcp_space** out);
JCP_API jcp_status jcp_space_create_custom(int n_comp, int n_pad, int n_opt,
                                           int n_check, jcp_space** out);
JCP_API jcp_status jcp_space_get(const jcp_space* space, int* n_comp,
                                 int* n_pad, int* n_opt, int* n_check);
JCP_API void jcp_space_destroy(jcp_space* space);

/* Sequences use the JSON pulse-array format of the CLI. */
JCP_API jcp_status jcp_sequence_from_json(const char* json, jcp_sequence** out);
JCP_API jcp_status jcp_sequence_to_json(const jcp_sequence* seq, char** out);
JCP_API jcp_status jcp_sequence_length(const jcp_sequence* seq, size_t* out);
JCP_API jcp_status jcp_sequence_duration(const jcp_sequence* seq, double* out);
/* Propagator on one oscillator truncated at `truncation`. */
JCP_API jcp_status jcp_sequence_unitary(const jcp_sequence* seq,
                                        int truncation, jcp_matrix** out);
JCP_API void jcp_sequence_destroy(jcp_sequence* seq);

/* Row-major interleaved (re, im) storage, 2 * rows * cols doubles. */
JCP_API jcp_status jcp_matrix_create(int rows, int cols, const double* data,
                                     jcp_matrix** out);
JCP_API jcp_status jcp_matrix_shape(const jcp_matrix* m, int* rows, int* cols);
JCP_API jcp_status jcp_matrix_get(const jcp_matrix* m, int row, int col,
                                  double* re, double* im);
JCP_API jcp_status jcp_matrix_copy(const jcp_matrix* m, double* data,
                                   size_t count);
JCP_API void jcp_matrix_destroy(jcp_matrix* m);

JCP_API jcp_status jcp_cinc_prime_target(const jcp_space* space,
                                         jcp_matrix** out);
/* Phase-minimized error on the computational block. Both matrices must
 * share a truncation of at least n_comp. */
JCP_API jcp_status jcp_comp_error(const jcp_space* space,
                                  const jcp_matrix* target,
                                  const jcp_matrix* candidate,
                                  jcp_error_report* out);

JCP_API void jcp_run_options_init(jcp_run_options* options);
JCP_API size_t jcp_command_count(void);
JCP_API const char* jcp_command_name(size_t index);
/* Runs a CLI command. *exit_code receives 0 (success), 1 (threshold not
 * met, results written), 2 (config error) or 3 (runtime failure). The
 * return value is JCP_OK for exit codes 0 and 1. */
JCP_API jcp_status jcp_run_command(const char* command, const char* config_json,
                                   const char* out_dir,
                                   const jcp_run_options* options,
                                   int* exit_code);

#ifdef __cplusplus
}
#endif

#endif /* JCPULSE_JCPULSE_H_ */
