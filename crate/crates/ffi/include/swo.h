#ifndef SWO_H
#define SWO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SwoStatus {
  SWO_STATUS_OK = 0,
  SWO_STATUS_NULL_POINTER = 1,
  SWO_STATUS_INVALID_UTF8 = 2,
  SWO_STATUS_PARSE = 3,
  SWO_STATUS_INVALID_PARAMS = 4,
  SWO_STATUS_DOMAIN = 5,
  SWO_STATUS_NOT_VALUE_BASED = 6,
  SWO_STATUS_TOO_LARGE = 7,
  SWO_STATUS_GUARD = 8,
  SWO_STATUS_PANIC = 9,
} SwoStatus;

typedef enum SwoVerdict {
  SWO_VERDICT_STRICTLY_BETTER = 0,
  SWO_VERDICT_EQUIVALENT = 1,
  SWO_VERDICT_STRICTLY_WORSE = 2,
  SWO_VERDICT_INCOMPARABLE = 3,
} SwoVerdict;

/**
 * Opaque social ordering.
 */
typedef struct SwoOrdering SwoOrdering;

/**
 * Opaque well-being profile.
 */
typedef struct SwoProfile SwoProfile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL.
 * The pointer stays valid until the next `swo_*` call on this thread.
 */
const char *swo_last_error(void);

/**
 * Parses one profile line such as `"90, 999*100, 999000*300"`.
 *
 * # Safety
 * `text_ptr` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SwoStatus swo_profile_parse(const char *text_ptr, struct SwoProfile **out);

/**
 * Number of individuals; 0 for a null handle.
 *
 * # Safety
 * `p` must be NULL or a live profile handle.
 */
uint64_t swo_profile_len(const struct SwoProfile *p);

/**
 * The profile in its canonical text form; free with [`swo_string_free`].
 *
 * # Safety
 * `p` must be NULL or a live profile handle.
 */
char *swo_profile_to_string(const struct SwoProfile *p);

/**
 * # Safety
 * `p` must be NULL or a handle from [`swo_profile_parse`] not yet freed.
 */
void swo_profile_free(struct SwoProfile *p);

/**
 * Reads an ordering from its TOML config text.
 *
 * # Safety
 * `toml` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SwoStatus swo_ordering_from_toml(const char *toml, struct SwoOrdering **out);

/**
 * # Safety
 * `o` must be NULL or a handle from [`swo_ordering_from_toml`] not yet freed.
 */
void swo_ordering_free(struct SwoOrdering *o);

/**
 * Compares `u` against `v`. `tolerance` is the relative tolerance for
 * floating orderings; pass 0 for the default.
 *
 * # Safety
 * Handles must be live; `out` must be a valid pointer.
 */
enum SwoStatus swo_compare(const struct SwoOrdering *o,
                           const struct SwoProfile *u,
                           const struct SwoProfile *v,
                           double tolerance,
                           enum SwoVerdict *out);

/**
 * Value of `p` under a value-based ordering, with its absolute error
 * bound (0 for exact values).
 *
 * # Safety
 * Handles must be live; `value` and `bound` must be valid pointers.
 */
enum SwoStatus swo_value(const struct SwoOrdering *o,
                         const struct SwoProfile *p,
                         double *value,
                         double *bound);

/**
 * Re-validates a chain certificate. `failures` receives the number of
 * steps whose preconditions or linkage fail (0 means valid).
 *
 * # Safety
 * `cert` must be a NUL-terminated string and `failures` a valid pointer.
 */
enum SwoStatus swo_certificate_validate(const char *cert, uint64_t *failures);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library not yet freed.
 */
void swo_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SWO_H */
