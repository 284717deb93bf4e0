/* C interface of the lck exact Lie-algebra library. Generated — do not edit. */

#ifndef LCK_H
#define LCK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * The call succeeded.
 */
#define LCK_STATUS_OK 0

/**
 * The input failed to parse (malformed document or rational string).
 */
#define LCK_STATUS_PARSE_ERROR 2

/**
 * The input parsed but violates a mathematical invariant.
 */
#define LCK_STATUS_INVARIANT_ERROR 3

/**
 * A required pointer argument was null.
 */
#define LCK_STATUS_NULL_ARGUMENT 4

/**
 * An internal panic was caught at the boundary.
 */
#define LCK_STATUS_PANIC 5

/**
 * Opaque handle to a validated metric Lie algebra with a complex structure.
 */
typedef struct LckAlgebra LckAlgebra;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse and validate an algebra document (JSON, the same format the CLI
 * reads); on success stores a handle in `out`.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
int32_t lck_algebra_from_json(const char *json, struct LckAlgebra **out);

/**
 * Release a handle returned by `lck_algebra_from_json`. Null is a no-op.
 *
 * # Safety
 * `handle` must be null or a pointer previously returned by this library
 * and not yet freed.
 */
void lck_algebra_free(struct LckAlgebra *handle);

/**
 * Dimension of the algebra behind `handle`, or -1 if `handle` is null.
 *
 * # Safety
 * `handle` must be null or a live handle from this library.
 */
int32_t lck_algebra_dim(const struct LckAlgebra *handle);

/**
 * Run the full structure analysis and store the report as a JSON string
 * in `out` (free it with `lck_string_free`).
 *
 * # Safety
 * `handle` must be a live handle and `out` a valid pointer.
 */
int32_t lck_algebra_report_json(const struct LckAlgebra *handle, char **out);

/**
 * Classify a 4-dimensional triple document (JSON). On success stores the
 * verdict (`"D4"` or `"gb b=<rational>"`) in `out`.
 *
 * # Safety
 * `triple_json` must be a valid NUL-terminated string and `out` a valid
 * pointer.
 */
int32_t lck_classify4_json(const char *triple_json, char **out);

/**
 * Run the built-in verification suite (all sections when `section` is
 * null, otherwise one of "section2" … "section7"). The rendered
 * one-line-per-check report is stored in `out`; the status is OK exactly
 * when every check passed.
 *
 * # Safety
 * `section` must be null or a valid NUL-terminated string; `out` must be
 * a valid pointer.
 */
int32_t lck_verify_paper(const char *section, char **out);

/**
 * Return a copy of the error message from the most recent failing call on
 * this thread (empty string if the last call succeeded). Free it with
 * `lck_string_free`.
 */
char *lck_last_error(void);

/**
 * Release a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must be null or a string previously returned by this library and
 * not yet freed.
 */
void lck_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LCK_H */
