/*
 * Copyright 2026 The msgate Authors
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

/*
 * msgate: ion-chain modes and amplitude/frequency-modulated Molmer-Sorensen
 * pulse design behind a plain C interface.
 *
 * Conventions:
 *   - Every function returning msgate_status reports failure through it;
 *     msgate_last_error() then holds a message for the calling thread.
 *   - Handles are opaque and owned by the caller; release each with its
 *     *_free function (NULL is accepted).
 *   - Ion and mode indices are 0-based. Modes are sorted by ascending
 *     frequency, so the common mode is index N-1.
 *   - Frequencies are angular (rad/s) unless the name ends in _hz.
 *   - Array getters take a capacity and fail with MSGATE_ERR_INVALID_ARGUMENT
 *     when it is too small.
 */

#ifndef MSGATE_MSGATE_H
#define MSGATE_MSGATE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MSGATE_BUILDING_LIBRARY)
#    define MSGATE_API __declspec(dllexport)
#  else
#    define MSGATE_API __declspec(dllimport)
#  endif
#else
#  define MSGATE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum msgate_status {
    MSGATE_OK = 0,
    MSGATE_ERR_INVALID_ARGUMENT = 1,
    MSGATE_ERR_NON_CONVERGENCE = 2,
    MSGATE_ERR_ION_ESCAPE = 3,
    MSGATE_ERR_DEGENERATE_SPACING = 4,
    MSGATE_ERR_IMAGINARY_MODE = 5,
    MSGATE_ERR_OUT_OF_RANGE = 6,
    MSGATE_ERR_BUDGET_EXHAUSTED = 7,
    MSGATE_ERR_DEGENERATE_PAIR = 8,
    MSGATE_ERR_INSUFFICIENT_POINTS = 9,
    MSGATE_ERR_IO = 10,
    MSGATE_ERR_PARSE = 11,
    MSGATE_ERR_INTERNAL = 12
} msgate_status;

typedef struct msgate_config msgate_config;
typedef struct msgate_crystal msgate_crystal;
typedef struct msgate_modes msgate_modes;
typedef struct msgate_schedule msgate_schedule;
typedef struct msgate_optimization msgate_optimization;
typedef struct msgate_report msgate_report;
typedef struct msgate_sweep msgate_sweep;
typedef struct msgate_powermap msgate_powermap;

MSGATE_API const char *msgate_version(void);
MSGATE_API const char *msgate_status_string(msgate_status status);
/* Message of the last failure on this thread; "" if none. */
MSGATE_API const char *msgate_last_error(void);

/* ---- configuration ---------------------------------------------------- */

/* Keys are "section.key" as in the INI file, values in interface units
 * (Hz, um, 1-based ion and mode numbers). */
MSGATE_API msgate_status msgate_config_create(msgate_config **out);
MSGATE_API msgate_status msgate_config_load(const char *path, msgate_config **out);
MSGATE_API msgate_status msgate_config_set(msgate_config *cfg, const char *key, const char *value);
/* Copies the value with its terminator; *needed (optional) receives the
 * buffer size required. */
MSGATE_API msgate_status msgate_config_get(const msgate_config *cfg, const char *key, char *buf,
                                           size_t capacity, size_t *needed);
MSGATE_API msgate_status msgate_config_validate(const msgate_config *cfg);
/* Canonical INI text listing every key. */
MSGATE_API msgate_status msgate_config_to_ini(const msgate_config *cfg, char *buf, size_t capacity,
                                              size_t *needed);
/* FNV-1a 64 of the canonical INI text, ignoring the [output] section. */
MSGATE_API msgate_status msgate_config_hash(const msgate_config *cfg, uint64_t *out);
MSGATE_API void msgate_config_free(msgate_config *cfg);

/* ---- crystal ---------------------------------------------------------- */

typedef struct msgate_crystal_summary {
    size_t n_ions;
    double mean_spacing_m;
    double spacing_variation;   /* (max - min) / mean neighbor spacing */
    double residual_force_n;
    long iterations;
    double energy_j;
} msgate_crystal_summary;

MSGATE_API msgate_status msgate_crystal_solve(const msgate_config *cfg, msgate_crystal **out);
MSGATE_API msgate_status msgate_crystal_from_positions(const double *z_m, size_t n, msgate_crystal **out);
MSGATE_API msgate_status msgate_crystal_load(const char *csv_path, msgate_crystal **out);
/* json_path may be NULL. */
MSGATE_API msgate_status msgate_crystal_save(const msgate_crystal *crystal, const msgate_config *cfg,
                                             const char *csv_path, const char *json_path);
MSGATE_API msgate_status msgate_crystal_summary_get(const msgate_crystal *crystal, msgate_crystal_summary *out);
MSGATE_API msgate_status msgate_crystal_positions(const msgate_crystal *crystal, double *z_m, size_t capacity);
MSGATE_API void msgate_crystal_free(msgate_crystal *crystal);

/* ---- transverse modes ------------------------------------------------- */

MSGATE_API msgate_status msgate_modes_solve(const msgate_config *cfg, const msgate_crystal *crystal,
                                            msgate_modes **out);
MSGATE_API msgate_status msgate_modes_load(const char *json_path, msgate_modes **out);
/* spectrum_csv_path may be NULL. */
MSGATE_API msgate_status msgate_modes_save(const msgate_modes *modes, const char *json_path,
                                           const char *spectrum_csv_path);
MSGATE_API msgate_status msgate_modes_count(const msgate_modes *modes, size_t *out);
MSGATE_API msgate_status msgate_modes_frequencies(const msgate_modes *modes, double *out, size_t capacity);
/* Entries u_{mode, i} for every ion i. */
MSGATE_API msgate_status msgate_modes_vector(const msgate_modes *modes, size_t mode, double *out,
                                             size_t capacity);
MSGATE_API msgate_status msgate_modes_lamb_dicke(const msgate_modes *modes, size_t ion, size_t mode,
                                                 double *out);
MSGATE_API void msgate_modes_free(msgate_modes *modes);

/* ---- pulse schedules -------------------------------------------------- */

typedef struct msgate_schedule_info {
    char shape;                 /* 'A' or 'B' */
    double gate_time_s;
    double mu_ref;              /* rad/s */
    double omega_max;           /* rad/s, 0 until calibrated */
    size_t n_fm_points;
} msgate_schedule_info;

/* Flat-frequency schedule at the configured reference mode and offset. */
MSGATE_API msgate_status msgate_schedule_default(const msgate_config *cfg, const msgate_modes *modes,
                                                 msgate_schedule **out);
MSGATE_API msgate_status msgate_schedule_load(const char *json_path, msgate_schedule **out);
/* waveform_csv_path may be NULL. */
MSGATE_API msgate_status msgate_schedule_save(const msgate_schedule *sched, const char *json_path,
                                              const char *waveform_csv_path);
MSGATE_API msgate_status msgate_schedule_info_get(const msgate_schedule *sched, msgate_schedule_info *out);
MSGATE_API msgate_status msgate_schedule_fm_points(const msgate_schedule *sched, double *out, size_t capacity);
MSGATE_API msgate_status msgate_schedule_set_fm_points(msgate_schedule *sched, const double *points, size_t n);
MSGATE_API msgate_status msgate_schedule_set_omega_max(msgate_schedule *sched, double omega_max);
/* Scales the schedule to beta_ij = pi/4 and stores the amplitude. Fails
 * with MSGATE_ERR_DEGENERATE_PAIR when the pair is uncoupled. */
MSGATE_API msgate_status msgate_schedule_calibrate(msgate_schedule *sched, const msgate_config *cfg,
                                                   const msgate_modes *modes, size_t ion_i, size_t ion_j,
                                                   double *omega_max);
MSGATE_API void msgate_schedule_free(msgate_schedule *sched);

/* ---- optimization ----------------------------------------------------- */

typedef struct msgate_optimization_result {
    double initial_cost;
    double final_cost;
    long evaluations;
    int best_start;
} msgate_optimization_result;

/* Pattern search over the free turning points of the configured problem. */
MSGATE_API msgate_status msgate_optimize(const msgate_config *cfg, const msgate_modes *modes,
                                         msgate_optimization **out);
MSGATE_API msgate_status msgate_optimization_result_get(const msgate_optimization *opt,
                                                        msgate_optimization_result *out);
/* New handle holding the optimized schedule at the reference amplitude. */
MSGATE_API msgate_status msgate_optimization_schedule(const msgate_optimization *opt, msgate_schedule **out);
MSGATE_API msgate_status msgate_optimization_save_trace(const msgate_optimization *opt, const char *csv_path);
MSGATE_API void msgate_optimization_free(msgate_optimization *opt);

/* ---- gate report ------------------------------------------------------ */

typedef struct msgate_report_values {
    size_t ion_i;
    size_t ion_j;
    double beta;                /* rad */
    double motional_error;
    double omega_max;           /* rad/s */
} msgate_report_values;

/* Evaluates the schedule at its stored omega_max (which must be set). */
MSGATE_API msgate_status msgate_report_run(const msgate_config *cfg, const msgate_modes *modes,
                                           const msgate_schedule *sched, size_t ion_i, size_t ion_j,
                                           msgate_report **out);
MSGATE_API msgate_status msgate_report_values_get(const msgate_report *report, msgate_report_values *out);
/* alpha_k(tau) of ion i. */
MSGATE_API msgate_status msgate_report_mode_endpoint(const msgate_report *report, size_t mode, double *re,
                                                     double *im);
/* Trajectories of the configured target modes, every `stride`-th sample;
 * trajectories_csv_path may be NULL. */
MSGATE_API msgate_status msgate_report_save(const msgate_report *report, const msgate_config *cfg,
                                            const msgate_modes *modes, const char *json_path,
                                            const char *trajectories_csv_path, size_t stride);
MSGATE_API void msgate_report_free(msgate_report *report);

/* ---- robustness sweep ------------------------------------------------- */

typedef struct msgate_sweep_summary {
    size_t n_points;
    double baseline_error;
    double fitted_slope;        /* NaN when fewer than 5 points fit */
    double slope_stderr;
    int fit_points;
} msgate_sweep_summary;

/* Static offsets from the config's [analysis] range, configured pair,
 * amplitude held at the schedule's omega_max. */
MSGATE_API msgate_status msgate_sweep_run(const msgate_config *cfg, const msgate_modes *modes,
                                          const msgate_schedule *sched, msgate_sweep **out);
MSGATE_API msgate_status msgate_sweep_load(const char *json_path, msgate_sweep **out);
MSGATE_API msgate_status msgate_sweep_save(const msgate_sweep *sweep, const char *csv_path, const char *json_path);
MSGATE_API msgate_status msgate_sweep_summary_get(const msgate_sweep *sweep, msgate_sweep_summary *out);
/* Either output array may be NULL. */
MSGATE_API msgate_status msgate_sweep_points(const msgate_sweep *sweep, double *offsets, double *errors,
                                             size_t capacity);
/* Re-fits and returns MSGATE_ERR_INSUFFICIENT_POINTS below five points. */
MSGATE_API msgate_status msgate_sweep_fit(msgate_sweep *sweep, double *slope, double *stderr_out);
MSGATE_API void msgate_sweep_free(msgate_sweep *sweep);

/* ---- power map -------------------------------------------------------- */

typedef struct msgate_powermap_stats {
    int finite_pairs;
    int degenerate_pairs;
    double min;                 /* rad/s */
    double max;
    double mean;
    double distance_correlation;
    double edge_mean;           /* pairs touching the outer five ions at either end */
    double central_mean;        /* all other pairs */
    double long_distance_mean;  /* |i - j| >= N/2 */
} msgate_powermap_stats;

/* pairs holds 2 * n_pairs indices (i0, j0, i1, j1, ...); NULL maps all
 * pairs. */
MSGATE_API msgate_status msgate_powermap_run(const msgate_config *cfg, const msgate_modes *modes,
                                             const msgate_schedule *sched, const size_t *pairs,
                                             size_t n_pairs, msgate_powermap **out);
/* Deterministic sample of distinct pairs, written as 2 * count indices. */
MSGATE_API msgate_status msgate_sample_pairs(size_t n_ions, size_t count, uint64_t seed, size_t *pairs);
MSGATE_API msgate_status msgate_powermap_load(const char *json_path, msgate_powermap **out);
MSGATE_API msgate_status msgate_powermap_save(const msgate_powermap *map, const msgate_crystal *crystal,
                                              const char *csv_path, const char *json_path);
/* NaN for pairs left out of a subset map. Fails with
 * MSGATE_ERR_DEGENERATE_PAIR on a flagged entry. */
MSGATE_API msgate_status msgate_powermap_entry(const msgate_powermap *map, size_t i, size_t j, double *out);
MSGATE_API msgate_status msgate_powermap_stats_get(const msgate_powermap *map, const msgate_crystal *crystal,
                                                   msgate_powermap_stats *out);
MSGATE_API void msgate_powermap_free(msgate_powermap *map);

#ifdef __cplusplus
}
#endif

#endif /* MSGATE_MSGATE_H */
