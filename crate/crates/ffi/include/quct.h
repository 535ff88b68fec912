/* SPDX-License-Identifier: Apache-2.0 */

#ifndef QUCT_H
#define QUCT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QuctStatus {
  QUCT_STATUS_OK = 0,
  QUCT_STATUS_NULL_ARGUMENT = 1,
  QUCT_STATUS_PARSE_ERROR = 2,
  QUCT_STATUS_UNSUPPORTED = 3,
  QUCT_STATUS_SIZE_CAP = 4,
  QUCT_STATUS_INVALID_UTF8 = 5,
  QUCT_STATUS_NUMERIC = 6,
  QUCT_STATUS_INTERNAL = 7,
} QuctStatus;

typedef enum QuctClassification {
  QUCT_CLASSIFICATION_ALL_ONE_MOD4 = 0,
  QUCT_CLASSIFICATION_ONE_THREE_MOD4 = 1,
  QUCT_CLASSIFICATION_UNSUPPORTED = 2,
} QuctClassification;

typedef enum QuctMethod {
  QUCT_METHOD_CLOSED = 0,
  QUCT_METHOD_ORACLE = 1,
  QUCT_METHOD_BOTH = 2,
} QuctMethod;

/*
 Opaque ring handle.
 */
typedef struct QuctRing QuctRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses and builds a ring. `cap == 0` selects the default order cap.
 On success `*out` owns a handle to release with `quct_ring_free`.

 # Safety
 `spec` must be a NUL-terminated string and `out` writable.
 */
enum QuctStatus quct_ring_parse(const char *spec, uint64_t cap, struct QuctRing **out);

/*
 # Safety
 `ring` must be null or a handle from `quct_ring_parse` not yet freed.
 */
void quct_ring_free(struct QuctRing *ring);

/*
 Vertex count `|R|`, or 0 for a null handle.

 # Safety
 `ring` must be null or a live handle.
 */
uint64_t quct_ring_order(const struct QuctRing *ring);

/*
 # Safety
 `ring` must be a live handle and `out` writable.
 */
enum QuctStatus quct_ring_classification(const struct QuctRing *ring, enum QuctClassification *out);

/*
 Canonical name such as `Z9*F5`.

 # Safety
 `ring` must be a live handle and `out` writable.
 */
enum QuctStatus quct_ring_canonical(const struct QuctRing *ring, char **out);

/*
 Closed-form spectrum as JSON `[{"value", "approx", "multiplicity"}]`.

 # Safety
 `ring` must be a live handle and `out` writable.
 */
enum QuctStatus quct_spectrum_json(const struct QuctRing *ring, char **out);

/*
 Full report as JSON, the same document `quct report --format json` prints.

 # Safety
 `ring` must be a live handle and `out` writable.
 */
enum QuctStatus quct_report_json(const struct QuctRing *ring,
                                 enum QuctMethod method,
                                 uint32_t k_max,
                                 char **out);

/*
 Exact energy. `approx` receives the float value and, when `exact` is
 non-null, `*exact` receives the exact value as text such as `8 + 8*sqrt(5)`.

 # Safety
 `ring` must be a live handle, `approx` writable, `exact` null or writable.
 */
enum QuctStatus quct_energy(const struct QuctRing *ring, double *approx, char **exact);

/*
 Closed-form triangle count.

 # Safety
 `ring` must be a live handle and `out` writable.
 */
enum QuctStatus quct_triangles(const struct QuctRing *ring, uint64_t *out);

/*
 Ramanujan property from the spectrum and from the ring shape.

 # Safety
 `ring` must be a live handle; `computed` and `classifier` writable.
 */
enum QuctStatus quct_ramanujan(const struct QuctRing *ring, bool *computed, bool *classifier);

/*
 Whether the energy exceeds `2(n - 1)`, exactly and per the classifier.

 # Safety
 `ring` must be a live handle; `computed` and `classifier` writable.
 */
enum QuctStatus quct_hyperenergetic(const struct QuctRing *ring, bool *computed, bool *classifier);

/*
 Runs the invariant battery. `*pass` is the overall verdict; when `json`
 is non-null `*json` receives the per-check report.

 # Safety
 `ring` must be a live handle, `pass` writable, `json` null or writable.
 */
enum QuctStatus quct_verify(const struct QuctRing *ring, bool *pass, char **json);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must be null or a string from this library not yet freed.
 */
void quct_string_free(char *s);

/*
 Message for the last failed call on this thread, empty after a success.
 Valid until the next call into this library on the same thread.
 */
const char *quct_last_error(void);

/*
 Library version, statically allocated.
 */
const char *quct_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUCT_H */
