#ifndef DFM_H
#define DFM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum DfmStatus {
  DFM_STATUS_OK = 0,
  /**
   * Computation failed; see `dfm_last_error`.
   */
  DFM_STATUS_FAILED = 1,
  /**
   * Invalid argument (order out of range, zero length, null pointer).
   */
  DFM_STATUS_USAGE = 2,
} DfmStatus;

/**
 * Opaque engine handle. Holds the last error message; classification
 * results are cached process-wide, so handles are cheap.
 */
typedef struct DfmEngine DfmEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates an engine handle. Never fails; free with [`dfm_engine_free`].
 */
struct DfmEngine *dfm_engine_new(void);

/**
 * Frees an engine handle. A null pointer is ignored.
 *
 * # Safety
 * `engine` must have come from [`dfm_engine_new`] and not been freed.
 */
void dfm_engine_free(struct DfmEngine *engine);

/**
 * Frees a string returned by this library. A null pointer is ignored.
 *
 * # Safety
 * `s` must have been returned by a `dfm_*` function and not been freed.
 */
void dfm_string_free(char *s);

/**
 * Last error message for this handle, or null. The returned string is
 * owned by the handle; do not free it.
 *
 * # Safety
 * `engine` must be a live handle from [`dfm_engine_new`].
 */
const char *dfm_last_error(const struct DfmEngine *engine);

/**
 * Exact central moment at a given length, as a `num/den` string in `out`.
 * `statistic` is 0 for the sum of squared autocorrelations, 1 for the
 * demerit factor.
 *
 * # Safety
 * `engine` must be a live handle; `out` must be a valid writable pointer.
 */
int dfm_moment_value(struct DfmEngine *engine,
                     uintptr_t p,
                     uint64_t ell,
                     int statistic,
                     char **out);

/**
 * Standardized moment as a decimal string with `digits` digits after the
 * point (exact truncation).
 *
 * # Safety
 * `engine` must be a live handle; `out` must be a valid writable pointer.
 */
int dfm_standardized_moment(struct DfmEngine *engine,
                            uintptr_t p,
                            uint64_t ell,
                            uintptr_t digits,
                            char **out);

/**
 * Isomorphism classes for order `p` as a JSON array (representative class
 * lists, orbit sizes, solution-count quasi-polynomials).
 *
 * # Safety
 * `engine` must be a live handle; `out` must be a valid writable pointer.
 */
int dfm_classes_json(struct DfmEngine *engine, uintptr_t p, char **out);

/**
 * Library version as a static string; do not free.
 */
const char *dfm_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DFM_H */
