#ifndef WEFAIR_H
#define WEFAIR_H

/* Generated by cbindgen from the wefair-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a C-ABI call.
 */
typedef enum WfStatus {
  /**
   * The call succeeded.
   */
  WF_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  WF_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  WF_STATUS_INVALID_UTF8 = 2,
  /**
   * Input bytes could not be read or decoded.
   */
  WF_STATUS_PARSE = 3,
  /**
   * Well-formed input failed semantic validation.
   */
  WF_STATUS_VALIDATION = 4,
  /**
   * The solver could not produce a solution for this instance.
   */
  WF_STATUS_SOLVE = 5,
  /**
   * A numeric argument was out of range.
   */
  WF_STATUS_INVALID_ARGUMENT = 6,
} WfStatus;

/**
 * A validated population behind an opaque handle.
 */
typedef struct WfPopulation WfPopulation;

/**
 * A solve result behind an opaque handle.
 */
typedef struct WfResult WfResult;

/**
 * A per-cell utility table behind an opaque handle.
 */
typedef struct WfUtility WfUtility;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or null if no
 * call has failed yet.
 *
 * The pointer stays valid until the next failing call on the same
 * thread; do not free it.
 */
const char *wf_last_error_message(void);

/**
 * Parses and validates a population from JSON
 * (`{"cells": [{x, a, mass, p, alpha_plus, alpha_minus}, ...]}`).
 *
 * On success writes a new handle to `out`; release it with
 * [`wf_population_free`].
 *
 * # Safety
 *
 * `json` must be null or point to a NUL-terminated string; `out` must
 * be null or point to writable memory for one pointer.
 */
enum WfStatus wf_population_parse_json(const char *json, struct WfPopulation **out);

/**
 * Number of cells in the population.
 *
 * # Safety
 *
 * `pop` must be null or a live handle from this library; `out` must be
 * null or writable.
 */
enum WfStatus wf_population_cell_count(const struct WfPopulation *pop, size_t *out);

/**
 * Releases a population handle; null is ignored.
 *
 * # Safety
 *
 * `pop` must be null or a handle from this library not yet freed.
 */
void wf_population_free(struct WfPopulation *pop);

/**
 * Builds a utility table from a concept JSON document (kinds:
 * demographic_parity, equal_opportunity, equalized_odds_member,
 * heterogeneous_eo, custom).
 *
 * On success writes a new handle to `out`; release it with
 * [`wf_utility_free`].
 *
 * # Safety
 *
 * `pop` must be null or a live handle; `json` null or NUL-terminated;
 * `out` null or writable.
 */
enum WfStatus wf_utility_from_concept_json(const struct WfPopulation *pop,
                                           const char *json,
                                           struct WfUtility **out);

/**
 * Releases a utility handle; null is ignored.
 *
 * # Safety
 *
 * `u` must be null or a handle from this library not yet freed.
 */
void wf_utility_free(struct WfUtility *u);

/**
 * Expected revenue of the unconstrained optimum.
 *
 * # Safety
 *
 * `pop` must be null or a live handle; `out` null or writable.
 */
enum WfStatus wf_unconstrained_revenue(const struct WfPopulation *pop, double *out);

/**
 * Solves for the revenue-optimal welfare-equalizing classifier with
 * the exact curve algorithm.
 *
 * On success writes a new handle to `out`; release it with
 * [`wf_result_free`].
 *
 * # Safety
 *
 * `pop` and `u` must be null or live handles; `out` null or writable.
 */
enum WfStatus wf_solve_we(const struct WfPopulation *pop,
                          const struct WfUtility *u,
                          struct WfResult **out);

/**
 * Solves with the bisection algorithm; `tol` is the multiplier
 * bracket width and must be a positive finite number.
 *
 * # Safety
 *
 * `pop` and `u` must be null or live handles; `out` null or writable.
 */
enum WfStatus wf_solve_we_bisection(const struct WfPopulation *pop,
                                    const struct WfUtility *u,
                                    double tol,
                                    struct WfResult **out);

/**
 * Expected revenue of the solution.
 *
 * # Safety
 *
 * `res` must be null or a live handle; `out` null or writable.
 */
enum WfStatus wf_result_revenue(const struct WfResult *res, double *out);

/**
 * Common welfare level of the solution.
 *
 * # Safety
 *
 * `res` must be null or a live handle; `out` null or writable.
 */
enum WfStatus wf_result_w_star(const struct WfResult *res, double *out);

/**
 * Writes the two realized group welfares to `out[0]` and `out[1]`.
 *
 * # Safety
 *
 * `res` must be null or a live handle; `out` null or writable for two
 * doubles.
 */
enum WfStatus wf_result_welfare(const struct WfResult *res, double *out);

/**
 * Writes the two per-group threshold multipliers to `out[0]` and
 * `out[1]`.
 *
 * # Safety
 *
 * `res` must be null or a live handle; `out` null or writable for two
 * doubles.
 */
enum WfStatus wf_result_lambda(const struct WfResult *res, double *out);

/**
 * Serializes the full solution (revenue, w_star, welfare, lambda,
 * classifier, tie cells, algorithm) as pretty JSON.
 *
 * On success writes a NUL-terminated string to `out`; release it with
 * [`wf_string_free`].
 *
 * # Safety
 *
 * `res` must be null or a live handle; `out` null or writable.
 */
enum WfStatus wf_result_to_json(const struct WfResult *res, char **out);

/**
 * Releases a result handle; null is ignored.
 *
 * # Safety
 *
 * `res` must be null or a handle from this library not yet freed.
 */
void wf_result_free(struct WfResult *res);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 *
 * `s` must be null or a string pointer from this library not yet
 * freed.
 */
void wf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEFAIR_H */
