// Copyright 2026 The sagd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the sagd library. All handles are opaque; every fallible
 * call returns a sagd_status and leaves a message retrievable through
 * sagd_last_error() on the calling thread. */
#ifndef SAGD_SAGD_H
#define SAGD_SAGD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SAGD_API __declspec(dllexport)
#else
#define SAGD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum sagd_status {
  SAGD_OK = 0,
  SAGD_ERROR = 1,
  SAGD_CONFIG_ERROR = 2,
  SAGD_DIVERGENCE = 3,
  SAGD_IO_ERROR = 4,
  SAGD_DOMAIN_ERROR = 5,
  SAGD_INVALID_ARGUMENT = 6
} sagd_status;

typedef struct sagd_config sagd_config;
typedef struct sagd_potential sagd_potential;
typedef struct sagd_chain sagd_chain;

SAGD_API const char* sagd_version(void);
SAGD_API const char* sagd_last_error(void);

/* ---- configuration ---------------------------------------------------- */

SAGD_API sagd_status sagd_config_create(sagd_config** out);
SAGD_API sagd_status sagd_config_load(const char* path, sagd_config** out);
SAGD_API sagd_status sagd_config_parse(const char* text, sagd_config** out);
SAGD_API sagd_status sagd_config_set(sagd_config* cfg, const char* key,
                                     const char* value);
SAGD_API void sagd_config_destroy(sagd_config* cfg);

/* ---- experiment subcommands ------------------------------------------- */

SAGD_API size_t sagd_command_count(void);
/* NULL when index is out of range. */
SAGD_API const char* sagd_command_name(size_t index);
/* One-line description of `name`; NULL for an unknown subcommand. */
SAGD_API const char* sagd_command_summary(const char* name);
/* Key listing for `name`; NULL for an unknown subcommand. */
SAGD_API const char* sagd_command_help(const char* name);
/* Runs `name` and writes CSV output to out_path. Warnings go to stderr. */
SAGD_API sagd_status sagd_command_run(const char* name, const sagd_config* cfg,
                                      uint64_t seed, const char* out_path,
                                      unsigned threads);

/* ---- special functions ------------------------------------------------ */

SAGD_API sagd_status sagd_log_gamma(double s, double* out);
SAGD_API sagd_status sagd_digamma(double s, double* out);
SAGD_API sagd_status sagd_step_size_bound(double gamma, double nu, double beta,
                                          double* out);

/* ---- potentials ------------------------------------------------------- */

/* mean may be NULL for the origin. */
SAGD_API sagd_status sagd_potential_gaussian(const double* mean, size_t dim,
                                             sagd_potential** out);
SAGD_API sagd_status sagd_potential_gamma_latent(const double* data, size_t n,
                                                 double a, double b,
                                                 sagd_potential** out);
SAGD_API size_t sagd_potential_dim(const sagd_potential* pot);
SAGD_API sagd_status sagd_potential_value(const sagd_potential* pot,
                                          const double* xi, double* out);
SAGD_API sagd_status sagd_potential_gradient(const sagd_potential* pot,
                                             const double* xi, double* out);
SAGD_API void sagd_potential_destroy(sagd_potential* pot);

/* ---- Langevin chains -------------------------------------------------- */

/* The chain keeps its own reference to the potential. rho0 may be NULL for
 * zero momentum. */
SAGD_API sagd_status sagd_chain_create(const sagd_potential* pot, double gamma,
                                       double delta, uint64_t seed,
                                       uint64_t stream, const double* xi0,
                                       const double* rho0, sagd_chain** out);
/* Advances burn_in + steps steps; mean_xi (dim entries, may be NULL)
 * receives the average position over the last `steps` states. */
SAGD_API sagd_status sagd_chain_run(sagd_chain* chain, size_t steps,
                                    size_t burn_in, double* mean_xi);
SAGD_API sagd_status sagd_chain_state(const sagd_chain* chain, double* xi,
                                      double* rho, uint64_t* step_count);
SAGD_API void sagd_chain_destroy(sagd_chain* chain);

/* ---- distribution distances ------------------------------------------- */

SAGD_API sagd_status sagd_ks_samples(const double* a, size_t na,
                                     const double* b, size_t nb, double* out);
SAGD_API sagd_status sagd_w1_samples(const double* a, size_t na,
                                     const double* b, size_t nb, double* out);
/* KS and W1 between a sample and a named latent law ("normal",
 * "exponential", "mixture"); either output pointer may be NULL. */
SAGD_API sagd_status sagd_distance_to_latent(const double* sample, size_t n,
                                             const char* latent, double* ks,
                                             double* w1);

#ifdef __cplusplus
}
#endif

#endif /* SAGD_SAGD_H */
