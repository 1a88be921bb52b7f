/*
 * This file is part of libhnl.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may
 * not use this file except in compliance with the License. You may obtain
 * a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
 */

/*
 * C interface to libhnl: closed-form detection of hidden Bell-CHSH
 * nonlocality of two-qubit states under local filtering, the optimal
 * filtered violation, a brute-force filter-search oracle, and Monte-Carlo
 * volume surveys over states with one maximally mixed marginal.
 *
 * Conventions:
 *   - States are opaque handles created by the constructors below and
 *     released with hnl_state_free().
 *   - Structured results are returned as JSON strings allocated by the
 *     library; release them with hnl_string_free().
 *   - Every fallible call returns HNL_OK or an error code and, when the
 *     caller passes a buffer, a human-readable message in errbuf.
 */

#ifndef HNL_H
#define HNL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HNL_API __declspec(dllexport)
#else
#define HNL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct hnl_state hnl_state;

typedef enum hnl_status {
  HNL_OK = 0,
  HNL_ERR_NOT_HERMITIAN = 1,
  HNL_ERR_NOT_UNIT_TRACE = 2,
  HNL_ERR_NOT_POSITIVE = 3,
  HNL_ERR_NON_REAL_CORRELATION = 4,
  HNL_ERR_COMPLEX_SPECTRUM = 5,
  HNL_ERR_SINGULAR_FILTER = 6,
  HNL_ERR_FILTER_ANNIHILATES = 7,
  HNL_ERR_CONVERGENCE_FAILURE = 8,
  HNL_ERR_WRONG_CASE = 9,
  HNL_ERR_CONSISTENCY_VIOLATION = 10,
  HNL_ERR_INVALID_CONFIG = 11,
  HNL_ERR_PARSE = 12,
  HNL_ERR_INVALID_ARGUMENT = 13,
  HNL_ERR_INTERNAL = 14
} hnl_status;

HNL_API const char* hnl_status_name(hnl_status st);
HNL_API const char* hnl_version(void);

HNL_API void hnl_string_free(char* s);
HNL_API void hnl_state_free(hnl_state* s);

/* Deterministic child seed for (seed, index); same derivation the library
 * uses internally, so callers can reproduce per-sample states. */
HNL_API uint64_t hnl_seed_derive(uint64_t seed, uint64_t index);

/* --- state construction ------------------------------------------------ */

/* Parses {"rho": [[[re, im] x4] x4]} and validates physicality. */
HNL_API hnl_status hnl_state_from_json(const char* text, hnl_state** out,
                                       char* errbuf, size_t errbuf_len);

HNL_API hnl_status hnl_state_to_json(const hnl_state* s, char** out_json,
                                     char* errbuf, size_t errbuf_len);

/* p |psi-><psi-| + (1-p) I/4, p in [0, 1]. */
HNL_API hnl_status hnl_state_werner(double p, hnl_state** out, char* errbuf,
                                    size_t errbuf_len);

HNL_API hnl_status hnl_state_random_pure(uint64_t seed, hnl_state** out,
                                         char* errbuf, size_t errbuf_len);

/* Choi state of a Haar-random qubit channel (Stinespring isometry with the
 * given environment dimension; 4 spans all qubit channels). */
HNL_API hnl_status hnl_state_random_choi(uint64_t seed, int env_dim,
                                         hnl_state** out, char* errbuf,
                                         size_t errbuf_len);

/* The rank-deficient normal-form family; requires b+c >= 0, b <= a, c <= a
 * and (a-b)(a-c) >= d^2. */
HNL_API hnl_status hnl_state_normal_form_family(double a, double b, double c,
                                                double d, hnl_state** out,
                                                char* errbuf,
                                                size_t errbuf_len);

/* --- analysis ----------------------------------------------------------- */

/* Criterion report: spectrum, hidden_nonlocal, max_filtered_chsh,
 * horodecki_M, chsh_unfiltered, separable. */
HNL_API hnl_status hnl_analyze(const hnl_state* s, char** report_json,
                               char* errbuf, size_t errbuf_len);

/* --- survey ------------------------------------------------------------- */

typedef void (*hnl_progress_fn)(double fraction_done, void* user);

/* measure_tag: "stinespring-env4" (default when NULL) or
 * "ginibre-filtered". threads <= 0 uses all cores. */
HNL_API hnl_status hnl_survey_run(uint64_t n_samples, uint64_t seed,
                                  const char* measure_tag, int threads,
                                  hnl_progress_fn progress, void* user,
                                  char** report_json, char* errbuf,
                                  size_t errbuf_len);

/* CSV rendering (label, count, fraction, ci_low, ci_high per class) of a
 * report produced by hnl_survey_run. */
HNL_API hnl_status hnl_survey_report_csv(const char* report_json,
                                         char** out_csv, char* errbuf,
                                         size_t errbuf_len);

/* --- filter-search oracle ------------------------------------------------ */

HNL_API hnl_status hnl_oracle_search(const hnl_state* s, int n_random,
                                     int n_refine, double t_min, uint64_t seed,
                                     char** result_json, char* errbuf,
                                     size_t errbuf_len);

/* certified is set to 1 when the search agrees with the closed form within
 * slack, else 0; result_json (optional) receives the search result. */
HNL_API hnl_status hnl_certify(const hnl_state* s, int n_random, int n_refine,
                               double t_min, uint64_t seed, double slack,
                               int* certified, char** result_json,
                               char* errbuf, size_t errbuf_len);

/* --- normal form / quasi-distillation ----------------------------------- */

/* Reduces toward the filtering normal form and, for the rank-deficient
 * entangled class, tabulates the probability-versus-violation trade-off
 * over the n_grid values. n_grid may be NULL when n_grid_len is 0. */
HNL_API hnl_status hnl_distill(const hnl_state* s, double eps, int max_iter,
                               const double* n_grid, size_t n_grid_len,
                               char** result_json, char* errbuf,
                               size_t errbuf_len);

#ifdef __cplusplus
}
#endif

#endif /* HNL_H */
