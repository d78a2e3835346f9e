#ifndef RIESZ_SPECTRUM_H
#define RIESZ_SPECTRUM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum RsStatus {
  RS_STATUS_OK = 0,
  RS_STATUS_NULL_POINTER = 1,
  RS_STATUS_INVALID_UTF8 = 2,
  RS_STATUS_PARSE = 3,
  RS_STATUS_INVALID_ARGUMENT = 4,
  /**
   * Input violates a documented precondition (not PSD, not symmetric, ...).
   */
  RS_STATUS_PRECONDITION = 5,
  /**
   * Arguments belong to different spaces.
   */
  RS_STATUS_CROSS_SPACE = 6,
  /**
   * Not decidable at the requested precision.
   */
  RS_STATUS_UNRESOLVABLE = 7,
  /**
   * The element is certified below the threshold.
   */
  RS_STATUS_NOT_POSITIVE = 8,
  RS_STATUS_INTERNAL = 9,
  RS_STATUS_PANIC = 10,
} RsStatus;

/**
 * Opaque element handle.
 */
typedef struct RsElement RsElement;

/**
 * Opaque spectrum-point handle; its evaluation cache grows with use.
 */
typedef struct RsPoint RsPoint;

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call on the same thread; do not free it.
 */
const char *rs_last_error(void);

/**
 * Library version as a static string; do not free it.
 */
const char *rs_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void rs_string_free(char *s);

/**
 * Parses an element from its JSON form (`{"space": "qn" | "pl" | "herm", ...}`).
 *
 * # Safety
 * `json` must be a nul-terminated string, `out` writable.
 */
enum RsStatus rs_element_from_json(const char *json, struct RsElement **out);

/**
 * Parses an element into the space of `like`, so the two can be combined
 * (a matrix joins the algebra of `like` rather than generating its own).
 *
 * # Safety
 * `like` must be a live handle, `json` a nul-terminated string, `out` writable.
 */
enum RsStatus rs_element_from_json_in(const struct RsElement *like,
                                      const char *json,
                                      struct RsElement **out);

/**
 * Releases an element. Null is ignored.
 *
 * # Safety
 * `e` must come from this library and not have been freed.
 */
void rs_element_free(struct RsElement *e);

/**
 * JSON form of an element.
 *
 * # Safety
 * `e` must be a live handle, `out` writable.
 */
enum RsStatus rs_element_to_json(const struct RsElement *e, char **out);

/**
 * `sup a` within `eps` from the located cut of the instance. With
 * `generic` nonzero it uses only positivity queries instead.
 *
 * # Safety
 * `a` must be a live handle, `eps` a nul-terminated rational, `out` writable.
 */
enum RsStatus rs_sup(const struct RsElement *a, const char *eps, int generic, char **out);

/**
 * `‖a‖` (the least `λ` with `|a| <= λ·1`) within `eps`.
 *
 * # Safety
 * As for [`rs_sup`].
 */
enum RsStatus rs_norm(const struct RsElement *a, const char *eps, char **out);

/**
 * Decides `sup a > 0` versus `sup a < r`. Writes 1 to `is_pos` with a
 * strict lower bound on `sup a` in `value`, or 0 with `r` in `value`.
 *
 * # Safety
 * `a` must be a live handle, `r` a nul-terminated rational, outputs writable.
 */
enum RsStatus rs_pos(const struct RsElement *a, const char *r, int *is_pos, char **value);

/**
 * Starts a spectrum point with `σ(a) > 0`, certified by a positivity
 * query at threshold `r`. Fails with `NotPositive` when `sup a < r`.
 *
 * # Safety
 * `a` must be a live handle, `r` a nul-terminated rational, `out` writable.
 */
enum RsStatus rs_point_new(const struct RsElement *a, const char *r, struct RsPoint **out);

/**
 * `σ(b)` within `eps`. `b` must live in the space the point was built in
 * (see [`rs_element_from_json_in`]).
 *
 * # Safety
 * `p` and `b` must be live handles, `eps` a nul-terminated rational, `out` writable.
 */
enum RsStatus rs_point_eval(struct RsPoint *p,
                            const struct RsElement *b,
                            const char *eps,
                            char **out);

/**
 * Releases a point. Null is ignored.
 *
 * # Safety
 * `p` must come from this library and not have been freed.
 */
void rs_point_free(struct RsPoint *p);

/**
 * Square root `S` of a positive semidefinite matrix element with
 * `‖S² − A‖ <= tol`; `S` commutes with the algebra of `a`.
 *
 * # Safety
 * `a` must be a live handle, `tol` a nul-terminated rational, `out` writable.
 */
enum RsStatus rs_sqrt(const struct RsElement *a, const char *tol, struct RsElement **out);

/**
 * Multiplicativity check of spectrum evaluations on the algebra given as
 * `{"generators": [matrix, ...]}`. Writes 1 or 0 to `ok` and, if
 * `report` is non-null, a JSON summary there.
 *
 * # Safety
 * `algebra_json` and `eps` must be nul-terminated strings, `ok` writable.
 */
enum RsStatus rs_gelfand(const char *algebra_json, const char *eps, int *ok, char **report);

#endif  /* RIESZ_SPECTRUM_H */
