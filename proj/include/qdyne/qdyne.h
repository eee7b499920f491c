/* Copyright 2026 qdyne authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the qdyne shared library: continuous-measurement
 * simulations of a qubit in a leaky cavity, reconstruction of the induced
 * qubit effects, and the sharpness/compatibility algebra on (bias, Bloch)
 * four-vectors. Handles are opaque; every entry point returns a status code
 * and qdyne_last_error() describes the most recent failure on the calling
 * thread. Strings returned through char** are owned by the caller and must
 * be released with qdyne_string_free().
 */

#ifndef QDYNE_H
#define QDYNE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qdyne_status {
    QDYNE_OK = 0,
    QDYNE_ERR_INVALID_ARG = 1,
    QDYNE_ERR_CONFIG = 2,
    QDYNE_ERR_NUMERIC = 3,
    QDYNE_ERR_IO = 4,
    QDYNE_ERR_INTERNAL = 5
} qdyne_status;

const char* qdyne_version(void);
const char* qdyne_last_error(void);
void qdyne_string_free(char* s);

/* ---- four-vector algebra; bloch arguments point at double[3] ---- */

qdyne_status qdyne_minkowski(double mu_a, const double* bloch_a, double mu_b,
                             const double* bloch_b, double* out);
qdyne_status qdyne_sharpness(double mu, const double* bloch, double* out);
qdyne_status qdyne_compatibility(double mu_a, const double* bloch_a, double mu_b,
                                 const double* bloch_b, double* out);
qdyne_status qdyne_bias_bounds(double mu, const double* bloch, double* lower, double* upper,
                               int* in_window);

/* ---- experiments ---- */

typedef struct qdyne_experiment qdyne_experiment;

qdyne_status qdyne_experiment_create(const char* config_json, qdyne_experiment** out);
qdyne_status qdyne_experiment_create_preset(const char* preset_name, qdyne_experiment** out);
qdyne_status qdyne_experiment_set_seed(qdyne_experiment* exp, uint64_t seed);
/* Normalized configuration of the handle as JSON. */
qdyne_status qdyne_experiment_config(const qdyne_experiment* exp, char** json_out);
/* Runs and writes the artifact bundle into out_dir. workers <= 0 selects the
 * hardware concurrency. */
qdyne_status qdyne_experiment_run(qdyne_experiment* exp, const char* out_dir, int workers);
void qdyne_experiment_destroy(qdyne_experiment* exp);

/* ---- single-trajectory reconstruction (diagnostics, tests) ---- */

typedef struct qdyne_povm_trajectory qdyne_povm_trajectory;

/* Reconstructs the effect trajectory of one scheme ("heterodyne_x", ...,
 * "adiabatic_y") on substream stream_id of the experiment's noise, for the
 * given cavity squeezing. */
qdyne_status qdyne_povm_reconstruct(const qdyne_experiment* exp, const char* scheme,
                                    double squeezing, uint64_t stream_id,
                                    qdyne_povm_trajectory** out);
size_t qdyne_povm_trajectory_length(const qdyne_povm_trajectory* traj);
qdyne_status qdyne_povm_trajectory_point(const qdyne_povm_trajectory* traj, size_t index,
                                         double* t, double* mu, double* bloch3);
void qdyne_povm_trajectory_destroy(qdyne_povm_trajectory* traj);

/* ---- phase space, reports, presets ---- */

qdyne_status qdyne_phasespace_run(const char* config_json, const char* out_dir);
qdyne_status qdyne_report(const char* run_dir, char** markdown_out);
qdyne_status qdyne_preset_list(char** names_csv_out);
qdyne_status qdyne_preset_config(const char* name, char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* QDYNE_H */
