/* blockboot — block bootstrap confidence bounds for stationary time series.
 *
 * C API for the shared library. All functions return a bb_status; on error a
 * human-readable message is available from bb_last_error() until the next
 * call on the same thread. Strings returned through char** out-parameters are
 * owned by the caller and must be released with bb_free_text().
 */
#ifndef BLOCKBOOT_H
#define BLOCKBOOT_H

#include <stdint.h>

#if defined(_WIN32)
#define BB_API __declspec(dllexport)
#else
#define BB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bb_status {
  BB_OK = 0,
  BB_ERROR_INVALID_ARGUMENT = 1,
  BB_ERROR_NUMERIC = 2, /* degenerate sample or resampling distribution */
  BB_ERROR_CONFIG = 3,  /* study configuration violates the schema */
  BB_ERROR_IO = 4,
  BB_ERROR_INTERNAL = 5
} bb_status;

BB_API const char* bb_version(void);
BB_API const char* bb_status_name(bb_status status);
BB_API const char* bb_last_error(void);
BB_API void bb_free_text(char* text);

/* Default block lengths: ell = round(n^(1/3)) (ties up), k = floor(ell/2). */
BB_API bb_status bb_default_lengths(long n, long* out_ell, long* out_k);

/* Simulates n observations of "ar1", "ma1" or "arch1" with the given
 * coefficient, discarding burn_in initial values. out_values must hold n
 * doubles. Deterministic in the seed. */
BB_API bb_status bb_simulate(const char* model, double coefficient, long burn_in, long n,
                             uint64_t seed, double* out_values);

typedef struct bb_bound_options {
  const char* estimator; /* "mean" | "variance" | "lag1" */
  const char* method;    /* "basic" | "calibrated" | "studentized" | "dh" | "gk" */
  double alpha;
  long ell;  /* <= 0: auto */
  long k;    /* <= 0: auto */
  long b1;   /* first-level resamples */
  long b2;   /* second-level resamples (calibrated / studentized) */
  double gk_c;
  uint64_t seed;
} bb_bound_options;

typedef struct bb_bound_report {
  double theta_hat;
  double bound;
  double alpha_hat; /* calibrated method only; NaN otherwise */
  double tau;       /* studentizing factor where applicable; NaN otherwise */
  long ell;
  long k;
  long degenerate_resamples; /* dh/gk resamples dropped for non-positive tau*^2 */
} bb_bound_report;

/* Upper confidence bound for one series (one value per observation). */
BB_API bb_status bb_bound(const double* series, long n, const bb_bound_options* options,
                          bb_bound_report* out);

/* Coverage study. Create from a JSON config (see README for the schema),
 * optionally applying a profile ("desk" = as configured, "paper" = pinned
 * full-scale budgets), run, then render as "csv", "json" or "pretty". */
typedef struct bb_study bb_study;

BB_API bb_status bb_study_create(const char* config_json, const char* profile, bb_study** out);
BB_API bb_status bb_study_run(bb_study* study, int threads);
BB_API bb_status bb_study_render(const bb_study* study, const char* format, char** out_text);
BB_API bb_status bb_study_total_failures(const bb_study* study, long* out);
BB_API void bb_study_destroy(bb_study* study);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BLOCKBOOT_H */
