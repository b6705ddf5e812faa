#ifndef AVCHECK_H
#define AVCHECK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AvcStatus {
  AVC_STATUS_OK = 0,
  AVC_STATUS_NULL_POINTER = 1,
  AVC_STATUS_INVALID_UTF8 = 2,
  AVC_STATUS_INVALID_FORM = 3,
  AVC_STATUS_INVALID_SCHEME = 4,
  AVC_STATUS_UNKNOWN_TYPE = 5,
  AVC_STATUS_IO = 6,
  AVC_STATUS_OUT_OF_RANGE = 7,
  AVC_STATUS_PANIC = 99,
} AvcStatus;

typedef enum AvcVerdict {
  AVC_VERDICT_CONSISTENT = 0,
  AVC_VERDICT_PROHIBITED = 1,
} AvcVerdict;

/**
 * Rational symmetric bilinear form.
 */
typedef struct AvcForm AvcForm;

/**
 * Result of checking a scheme.
 */
typedef struct AvcReport AvcReport;

/**
 * Validated curve scheme.
 */
typedef struct AvcScheme AvcScheme;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *avc_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *avc_version(void);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void avc_string_free(char *s);

/**
 * Parses a whitespace separated matrix, one row per line.
 *
 * # Safety
 * `matrix_text` must be a NUL-terminated string and `out` writable.
 */
enum AvcStatus avc_form_parse(const char *matrix_text, struct AvcForm **out);

/**
 * # Safety
 * `form` must come from this library and not be freed twice.
 */
void avc_form_free(struct AvcForm *form);

/**
 * Dimension of the form; 0 for NULL.
 *
 * # Safety
 * `form` must be NULL or a live form.
 */
size_t avc_form_dim(const struct AvcForm *form);

/**
 * Writes the numbers of positive, negative and zero squares.
 *
 * # Safety
 * `form` must be a live form and the out pointers writable.
 */
enum AvcStatus avc_form_inertia(const struct AvcForm *form,
                                size_t *plus,
                                size_t *minus,
                                size_t *zero);

/**
 * Entry `(i, j)` as a `p/q` string; free with [`avc_string_free`].
 *
 * # Safety
 * `form` must be a live form and `out` writable.
 */
enum AvcStatus avc_form_entry(const struct AvcForm *form, size_t i, size_t j, char **out);

/**
 * Matrix text in the same format [`avc_form_parse`] accepts.
 *
 * # Safety
 * `form` must be a live form and `out` writable.
 */
enum AvcStatus avc_form_to_text(const struct AvcForm *form, char **out);

/**
 * Local form of a catalog type such as `"A3"` with variant `"x^{2n}-y^2"`.
 *
 * # Safety
 * Both strings must be NUL-terminated and `out` writable.
 */
enum AvcStatus avc_catalog_form(const char *name, const char *variant, struct AvcForm **out);

/**
 * Parses and validates a scheme from JSON text. Fixture paths are resolved
 * against the current directory.
 *
 * # Safety
 * `json` must be NUL-terminated and `out` writable.
 */
enum AvcStatus avc_scheme_from_json(const char *json, struct AvcScheme **out);

/**
 * Loads a scheme file; fixture paths resolve against its directory.
 *
 * # Safety
 * `path` must be NUL-terminated and `out` writable.
 */
enum AvcStatus avc_scheme_load(const char *path, struct AvcScheme **out);

/**
 * # Safety
 * `scheme` must come from this library and not be freed twice.
 */
void avc_scheme_free(struct AvcScheme *scheme);

/**
 * Runs the inequality check.
 *
 * # Safety
 * `scheme` must be a live scheme and `out` writable.
 */
enum AvcStatus avc_check(const struct AvcScheme *scheme, struct AvcReport **out);

/**
 * # Safety
 * `report` must come from this library and not be freed twice.
 */
void avc_report_free(struct AvcReport *report);

/**
 * # Safety
 * `report` must be a live report and `out` writable.
 */
enum AvcStatus avc_report_verdict(const struct AvcReport *report, enum AvcVerdict *out);

/**
 * Whether inequality `index` (1 to 4) holds.
 *
 * # Safety
 * `report` must be a live report and `out` writable.
 */
enum AvcStatus avc_report_holds(const struct AvcReport *report, uint32_t index, bool *out);

/**
 * Full report as pretty JSON; free with [`avc_string_free`].
 *
 * # Safety
 * `report` must be a live report and `out` writable.
 */
enum AvcStatus avc_report_to_json(const struct AvcReport *report, char **out);

/**
 * Classical lower and upper bounds on the Euler characteristic of the
 * positive region of a nonsingular curve of degree `2k`.
 *
 * # Safety
 * The out pointers must be writable.
 */
enum AvcStatus avc_check_petrovskii(int64_t chi_w,
                                    uint32_t k,
                                    bool *lower_holds,
                                    bool *upper_holds);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AVCHECK_H */
