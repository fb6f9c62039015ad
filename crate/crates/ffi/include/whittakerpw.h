#ifndef WHITTAKERPW_H
#define WHITTAKERPW_H

/* Generated by cbindgen from src/lib.rs; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum WpwStatus {
  WPW_STATUS_OK = 0,
  WPW_STATUS_NULL_ARGUMENT = 1,
  WPW_STATUS_INVALID_UTF8 = 2,
  WPW_STATUS_INPUT_PARSE = 3,
  WPW_STATUS_INVALID_CONFIG = 4,
  WPW_STATUS_DIVISION_BY_ZERO = 5,
  WPW_STATUS_IRRATIONAL_POLE = 6,
  WPW_STATUS_POLE_ON_CONTOUR = 7,
  WPW_STATUS_GUARD_EXCEEDED = 8,
  WPW_STATUS_NOT_COMPACTLY_SUPPORTED = 9,
  /**
   * A derived identity failed; signals an internal inconsistency.
   */
  WPW_STATUS_INCONSISTENT = 10,
  WPW_STATUS_NO_SOLUTION = 11,
  WPW_STATUS_PANIC = 12,
} WpwStatus;

/**
 * Opaque session handle.
 */
typedef struct WpwSession WpwSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a session for residue field size `q` (a rational string such as
 * `"3"`). `max_shell_guard <= 0` selects the default guard. The calibration
 * constant is computed once here.
 *
 * # Safety
 * `q` must be a NUL-terminated string; `out` must be writable.
 */
enum WpwStatus wpw_session_new(const char *q, int64_t max_shell_guard, struct WpwSession **out);

/**
 * Release a session. Null is ignored.
 *
 * # Safety
 * `session` must come from [`wpw_session_new`] and not be used afterwards.
 */
void wpw_session_free(struct WpwSession *session);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void wpw_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. Valid until the next
 * failing call on the same thread.
 */
const char *wpw_last_error(void);

/**
 * `E_z(a_n)` as Laurent-polynomial JSON.
 *
 * # Safety
 * `session` must be live; `out` must be writable.
 */
enum WpwStatus wpw_whittaker_value(const struct WpwSession *session, int64_t n, char **out);

/**
 * The derived a, b, j, ζ and expansion data as JSON.
 *
 * # Safety
 * `session` must be live; `out` must be writable.
 */
enum WpwStatus wpw_cfunctions(const struct WpwSession *session, char **out);

/**
 * The calibration constant as a rational string.
 *
 * # Safety
 * `session` must be live; `out` must be writable.
 */
enum WpwStatus wpw_calibration(const struct WpwSession *session, char **out);

/**
 * Transform of a Whittaker-function JSON (`{"q": .., "values": [[n, "c"], ..]}`).
 *
 * # Safety
 * `session` must be live; `f_json` NUL-terminated; `out` writable.
 */
enum WpwStatus wpw_transform(const struct WpwSession *session, const char *f_json, char **out);

/**
 * Paley–Wiener report for a Laurent-polynomial JSON; `*passes` receives the verdict.
 *
 * # Safety
 * `session` must be live; `f_json` NUL-terminated; `passes` and `out` writable.
 */
enum WpwStatus wpw_check_pw(const struct WpwSession *session,
                            const char *f_json,
                            bool *passes,
                            char **out);

/**
 * Invert a transform given as Laurent-polynomial JSON. `radius` may be null
 * for the default contour.
 *
 * # Safety
 * `session` must be live; strings NUL-terminated; `out` writable.
 */
enum WpwStatus wpw_invert(const struct WpwSession *session,
                          const char *f_json,
                          const char *radius,
                          char **out);

/**
 * Round-trip report for a Whittaker-function JSON; `*equal` receives the verdict.
 *
 * # Safety
 * `session` must be live; `f_json` NUL-terminated; `equal` and `out` writable.
 */
enum WpwStatus wpw_roundtrip(const struct WpwSession *session,
                             const char *f_json,
                             bool *equal,
                             char **out);

/**
 * Residual of the wave-packet transform identity for a Laurent Φ (JSON);
 * `*is_zero` receives whether it vanishes.
 *
 * # Safety
 * `session` must be live; `phi_json` NUL-terminated; `is_zero` and `out` writable.
 */
enum WpwStatus wpw_theorem5(const struct WpwSession *session,
                            const char *phi_json,
                            bool *is_zero,
                            char **out);

/**
 * Casselman test on a comma-separated exponent list such as `"-1,-1/2"`.
 *
 * # Safety
 * `exponents` NUL-terminated; `result` writable.
 */
enum WpwStatus wpw_casselman_check(const char *exponents, bool *result);

/**
 * Static name of a status code; unknown codes map to `"Unknown"`.
 */
const char *wpw_status_name(int32_t status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WHITTAKERPW_H */
