#ifndef LCDECOMP_H
#define LCDECOMP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LcFunctor {
  LC_FUNCTOR_HOCHSTER = 0,
  LC_FUNCTOR_TERAI = 1,
} LcFunctor;

/**
 * Status codes returned by every fallible function.
 */
typedef enum LcStatus {
  LC_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  LC_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  LC_STATUS_INVALID_UTF8 = 2,
  /**
   * The problem description was rejected.
   */
  LC_STATUS_INPUT_ERROR = 3,
  /**
   * The computation was refused for this input.
   */
  LC_STATUS_COMPUTATION_ERROR = 4,
  /**
   * An internal error; the handle should not be reused.
   */
  LC_STATUS_PANIC = 5,
} LcStatus;

/**
 * A parsed problem together with its poset of sums.
 */
typedef struct LcProblem LcProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a problem description (the JSON accepted by the command-line
 * tool) and builds its poset. On success `*out` owns a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum LcStatus lc_problem_from_json(const char *json, struct LcProblem **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `problem` must come from [`lc_problem_from_json`] and not be used again.
 */
void lc_problem_free(struct LcProblem *problem);

/**
 * Number of elements of the poset of sums.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LcStatus lc_problem_element_count(const struct LcProblem *problem, size_t *out);

/**
 * The poset as JSON, in the layout of `lcdecomp poset --output json`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LcStatus lc_poset_json(const struct LcProblem *problem, char **out);

/**
 * The decomposition report, in the layout of `lcdecomp decompose --output json`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LcStatus lc_decompose_json(const struct LcProblem *problem,
                                enum LcFunctor functor,
                                uint32_t max_degree,
                                char **out);

/**
 * `{"i": .., "series": {e: c}, "laurent": [[degree, coefficient], ...]}`
 * for the Hilbert series of `H^index_m`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LcStatus lc_hilbert_json(const struct LcProblem *problem,
                              int64_t index,
                              size_t depth,
                              char **out);

/**
 * The degree-wise comparison of `A/I` with the limit.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LcStatus lc_limit_check_json(const struct LcProblem *problem, uint32_t max_degree, char **out);

/**
 * Comparison with the Stanley–Reisner oracle; squarefree monomial input only.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LcStatus lc_oracle_compare_json(const struct LcProblem *problem, size_t depth, char **out);

/**
 * Castelnuovo–Mumford regularity read off the decomposition.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LcStatus lc_regularity(const struct LcProblem *problem, int64_t *out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used again.
 */
void lc_string_free(char *s);

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * is valid until the next library call on the same thread.
 */
const char *lc_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LCDECOMP_H */
