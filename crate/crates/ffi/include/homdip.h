#ifndef HOMDIP_H
#define HOMDIP_H

#pragma once

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HomdipStatus {
  HOMDIP_STATUS_OK = 0,
  HOMDIP_STATUS_NULL_POINTER = 1,
  HOMDIP_STATUS_INVALID_ARGUMENT = 2,
  HOMDIP_STATUS_PARSE_ERROR = 3,
  HOMDIP_STATUS_TRUNCATION = 4,
  HOMDIP_STATUS_NUMERICAL = 5,
  HOMDIP_STATUS_PANIC = 6,
} HomdipStatus;

typedef enum HomdipConvention {
  HOMDIP_CONVENTION_PER_PHOTON = 0,
  HOMDIP_CONVENTION_PER_FOCK_COMPONENT = 1,
} HomdipConvention;

typedef enum HomdipCriterion {
  HOMDIP_CRITERION_IDEAL_D = 0,
  HOMDIP_CRITERION_MEASURED = 1,
  HOMDIP_CRITERION_ASYMMETRIC = 2,
  HOMDIP_CRITERION_CONSERVATIVE = 3,
} HomdipCriterion;

typedef enum HomdipForm {
  HOMDIP_FORM_STANDARD = 0,
  HOMDIP_FORM_PAIR_CORRECTED = 1,
  HOMDIP_FORM_WORST_CASE = 2,
} HomdipForm;

/**
 * Opaque phase-scan handle.
 */
typedef struct HomdipScan HomdipScan;

/**
 * Opaque state handle.
 */
typedef struct HomdipState HomdipState;

/**
 * Criterion outcome. `q11` and `r` are NaN when the criterion does not use
 * them.
 */
typedef struct HomdipReport {
  enum HomdipCriterion criterion;
  double p0;
  double p02;
  double p20;
  double p22;
  double p11;
  double q11;
  double r;
  double lhs;
  double rhs;
  bool entangled;
  double concurrence_lower_bound;
} HomdipReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *homdip_version(void);

/**
 * Message for the most recent failure on this thread, or null. Valid until
 * the next call into the library on this thread.
 */
const char *homdip_last_error(void);

/**
 * Named state: "hom", "rho1", "rho2", "worst2color" or "vacuum".
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum HomdipStatus homdip_state_named(const char *name, struct HomdipState **out);

/**
 * State from the JSON state-file format.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum HomdipStatus homdip_state_from_json(const char *json, struct HomdipState **out);

/**
 * Serializes a state to JSON. The returned string must be released with
 * [`homdip_string_free`].
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum HomdipStatus homdip_state_to_json(const struct HomdipState *state, char **out);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void homdip_string_free(char *s);

/**
 * # Safety
 * `state` must be a live handle or null; it is invalid afterwards.
 */
void homdip_state_free(struct HomdipState *state);

/**
 * 1 for a multimode state, 0 for a single-mode state, -1 for null.
 *
 * # Safety
 * `state` must be a live handle or null.
 */
int32_t homdip_state_is_multimode(const struct HomdipState *state);

/**
 * Applies a phase `phi` on port A in place.
 *
 * # Safety
 * `state` must be a live handle.
 */
enum HomdipStatus homdip_state_phase_shift(struct HomdipState *state,
                                           double phi,
                                           enum HomdipConvention convention);

/**
 * Evaluates a criterion. `r` is the splitter reflection coefficient for the
 * asymmetric criterion and is ignored otherwise.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum HomdipStatus homdip_check(const struct HomdipState *state,
                               enum HomdipCriterion criterion,
                               enum HomdipForm form,
                               double r,
                               struct HomdipReport *out);

/**
 * Scans the measured criterion over the phase on port A.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum HomdipStatus homdip_scan(const struct HomdipState *state,
                              size_t points,
                              enum HomdipConvention convention,
                              struct HomdipScan **out);

/**
 * Number of detection intervals; 0 for null.
 *
 * # Safety
 * `scan` must be a live handle or null.
 */
size_t homdip_scan_interval_count(const struct HomdipScan *scan);

/**
 * Endpoints of interval `k` in radians; `end` may exceed 2π for an interval
 * that wraps.
 *
 * # Safety
 * `scan` must be a live handle; `start` and `end` must be writable.
 */
enum HomdipStatus homdip_scan_interval(const struct HomdipScan *scan,
                                       size_t k,
                                       double *start,
                                       double *end);

/**
 * Grid phase maximizing Q11; NaN for null.
 *
 * # Safety
 * `scan` must be a live handle or null.
 */
double homdip_scan_argmax(const struct HomdipScan *scan);

/**
 * # Safety
 * `scan` must be a live handle or null; it is invalid afterwards.
 */
void homdip_scan_free(struct HomdipScan *scan);

/**
 * Deviation of the two-mode product identity on a basis with `modes`
 * internal modes (at least 2) and at most four photons.
 *
 * # Safety
 * `deviation` must be writable.
 */
enum HomdipStatus homdip_mode_identity_check(size_t modes, double *deviation);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOMDIP_H */
