#ifndef FRAILHR_H
#define FRAILHR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum FrailhrStatus {
  FRAILHR_STATUS_OK = 0,
  FRAILHR_STATUS_NULL_POINTER = 1,
  FRAILHR_STATUS_INVALID_ARGUMENT = 2,
  FRAILHR_STATUS_DOMAIN = 3,
  FRAILHR_STATUS_UNSUPPORTED = 4,
  FRAILHR_STATUS_ESTIMATION = 5,
  FRAILHR_STATUS_BEYOND_SUPPORT = 6,
  FRAILHR_STATUS_PANIC = 99,
} FrailhrStatus;

typedef enum FrailhrCoupling {
  FRAILHR_COUPLING_COMONOTONE = 0,
  FRAILHR_COUPLING_INDEPENDENT = 1,
} FrailhrCoupling;

typedef enum FrailhrCensoringKind {
  FRAILHR_CENSORING_KIND_NONE = 0,
  FRAILHR_CENSORING_KIND_ADMINISTRATIVE = 1,
  FRAILHR_CENSORING_KIND_EXPONENTIAL = 2,
  FRAILHR_CENSORING_KIND_BOTH = 3,
} FrailhrCensoringKind;

/*
 Opaque Cox fit.
 */
typedef struct FrailhrCoxFit FrailhrCoxFit;

/*
 Opaque simulated dataset.
 */
typedef struct FrailhrDataset FrailhrDataset;

/*
 Opaque two-arm mixture truth.
 */
typedef struct FrailhrTruth FrailhrTruth;

/*
 Treatment arm index: 0 = control, 1 = research.
 */
typedef uint8_t FrailhrArm;

/*
 `admin_time` is read for `ADMINISTRATIVE` and `BOTH`, `rate` for `EXPONENTIAL` and `BOTH`.
 */
typedef struct FrailhrCensoring {
  enum FrailhrCensoringKind kind;
  double admin_time;
  double rate;
} FrailhrCensoring;

/*
 One simulated subject.
 */
typedef struct FrailhrRecord {
  uint64_t id;
  FrailhrArm arm;
  size_t stratum;
  double potential_time_0;
  double potential_time_1;
  double observed_time;
  bool event;
} FrailhrRecord;

/*
 Treatment-arm coefficient and convergence data of a Cox fit.
 */
typedef struct FrailhrFitSummary {
  double log_hr;
  double se;
  size_t iterations;
  bool converged;
  size_t n_events;
  double loglik;
} FrailhrFitSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL if none.
 The pointer stays valid until the next failing call on the same thread.
 */
const char *frailhr_last_error_message(void);

/*
 Static description of a status code.
 */
const char *frailhr_status_string(enum FrailhrStatus status);

/*
 Builds a two-arm truth from per-arm weight and rate arrays.

 # Safety
 Each array pointer must reference at least the given number of doubles.
 `out` must be writable; on success it receives a handle to free with
 [`frailhr_truth_free`].
 */
enum FrailhrStatus frailhr_truth_new(const double *control_weights,
                                     const double *control_rates,
                                     size_t control_components,
                                     const double *research_weights,
                                     const double *research_rates,
                                     size_t research_components,
                                     struct FrailhrTruth **out);

/*
 The built-in two-stratum scenario.

 # Safety
 `out` must be writable.
 */
enum FrailhrStatus frailhr_truth_two_stratum(struct FrailhrTruth **out);

/*
 # Safety
 `truth` must be NULL or a handle from this library not yet freed.
 */
void frailhr_truth_free(struct FrailhrTruth *truth);

/*
 # Safety
 `truth` must be a live handle and `out` writable.
 */
enum FrailhrStatus frailhr_marginal_survival(const struct FrailhrTruth *truth,
                                             FrailhrArm arm,
                                             double t,
                                             double *out);

/*
 # Safety
 `truth` must be a live handle and `out` writable.
 */
enum FrailhrStatus frailhr_marginal_hazard(const struct FrailhrTruth *truth,
                                           FrailhrArm arm,
                                           double t,
                                           double *out);

/*
 # Safety
 `truth` must be a live handle and `out` writable.
 */
enum FrailhrStatus frailhr_marginal_density(const struct FrailhrTruth *truth,
                                            FrailhrArm arm,
                                            double t,
                                            double *out);

/*
 # Safety
 `truth` must be a live handle and `out` writable.
 */
enum FrailhrStatus frailhr_cumulative_hazard(const struct FrailhrTruth *truth,
                                             FrailhrArm arm,
                                             double t,
                                             double *out);

/*
 # Safety
 `truth` must be a live handle and `out` writable.
 */
enum FrailhrStatus frailhr_hazard_ratio(const struct FrailhrTruth *truth, double t, double *out);

/*
 # Safety
 `truth` must be a live handle and `out` writable.
 */
enum FrailhrStatus frailhr_limit_hazard_ratio(const struct FrailhrTruth *truth, double *out);

/*
 Hazard ratio at each of `len` grid times, written to `out` (length `len`).

 # Safety
 `grid` and `out` must each reference `len` doubles; `truth` must be live.
 */
enum FrailhrStatus frailhr_hazard_ratio_curve(const struct FrailhrTruth *truth,
                                              const double *grid,
                                              size_t len,
                                              double *out);

/*
 Restricted mean survival of one arm up to `horizon`.

 # Safety
 `truth` must be a live handle and `out` writable.
 */
enum FrailhrStatus frailhr_rmst(const struct FrailhrTruth *truth,
                                FrailhrArm arm,
                                double horizon,
                                double *out);

/*
 `S_research(t) - S_control(t)`.

 # Safety
 `truth` must be a live handle and `out` writable.
 */
enum FrailhrStatus frailhr_landmark_difference(const struct FrailhrTruth *truth,
                                               double t,
                                               double *out);

/*
 `log S_research(t) / log S_control(t)`.

 # Safety
 `truth` must be a live handle and `out` writable.
 */
enum FrailhrStatus frailhr_log_survival_ratio(const struct FrailhrTruth *truth,
                                              double t,
                                              double *out);

/*
 Simulates `n_per_arm` subjects per arm. Deterministic in `seed`.

 # Safety
 `truth` must be live, `censoring` NULL (no censoring) or valid, `out` writable.
 Free the result with [`frailhr_dataset_free`].
 */
enum FrailhrStatus frailhr_simulate(const struct FrailhrTruth *truth,
                                    size_t n_per_arm,
                                    enum FrailhrCoupling coupling,
                                    const struct FrailhrCensoring *censoring,
                                    uint64_t seed,
                                    struct FrailhrDataset **out);

/*
 Number of records, or 0 for NULL.

 # Safety
 `dataset` must be NULL or live.
 */
size_t frailhr_dataset_len(const struct FrailhrDataset *dataset);

/*
 # Safety
 `dataset` must be live and `out` writable.
 */
enum FrailhrStatus frailhr_dataset_get(const struct FrailhrDataset *dataset,
                                       size_t index,
                                       struct FrailhrRecord *out);

/*
 # Safety
 `dataset` must be NULL or a live handle.
 */
void frailhr_dataset_free(struct FrailhrDataset *dataset);

/*
 Cox fit on a simulated dataset, by arm alone or arm plus stratum indicators.
 An unconverged fit is still returned with `FRAILHR_STATUS_OK`; check the summary.

 # Safety
 `dataset` must be live and `out` writable. Free with [`frailhr_cox_fit_free`].
 */
enum FrailhrStatus frailhr_cox_fit(const struct FrailhrDataset *dataset,
                                   bool adjust_for_stratum,
                                   struct FrailhrCoxFit **out);

/*
 # Safety
 `fit` must be live and `out` writable.
 */
enum FrailhrStatus frailhr_cox_fit_summary(const struct FrailhrCoxFit *fit,
                                           struct FrailhrFitSummary *out);

/*
 # Safety
 `fit` must be NULL or a live handle.
 */
void frailhr_cox_fit_free(struct FrailhrCoxFit *fit);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRAILHR_H */
