#ifndef KLEIN_FREQ_H
#define KLEIN_FREQ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KfParity {
  KF_PARITY_SHORTEST = 0,
  KF_PARITY_EVEN = 1,
  KF_PARITY_ODD = 2,
} KfParity;

typedef enum KfStatus {
  KF_STATUS_OK = 0,
  KF_STATUS_NULL_POINTER = 1,
  KF_STATUS_INVALID_ARGUMENT = 2,
  // The exact path only handles faces at integer distance 1.
  KF_STATUS_UNSUPPORTED = 3,
  KF_STATUS_BUDGET_EXCEEDED = 4,
  KF_STATUS_INVARIANT_VIOLATION = 5,
  // The caller's buffer is too short; the required length was written.
  KF_STATUS_BUFFER_TOO_SMALL = 6,
  KF_STATUS_PANIC = 7,
} KfStatus;

// Opaque lattice face.
typedef struct KfFace KfFace;

// Frequency estimate; `samples` counts cubature pairs on the exact path.
typedef struct KfFrequency {
  double value;
  double error;
  uint64_t samples;
  uint64_t accepted;
  uint64_t inconclusive;
} KfFrequency;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call into this library on the same thread.
const char *kf_last_error_message(void);

// Parses `{"vertices": [[x,y,z], ...]}`. Free the result with `kf_face_free`.
//
// # Safety
// `json` must be a nul-terminated string; `out` must be writable.
enum KfStatus kf_face_from_json(const char *json, struct KfFace **out);

// Builds a face from `n_vertices` triples laid out as `x0,y0,z0,x1,...`.
//
// # Safety
// `coords` must point to `3 * n_vertices` values; `out` must be writable.
enum KfStatus kf_face_from_vertices(const int64_t *coords,
                                    uintptr_t n_vertices,
                                    struct KfFace **out);

// # Safety
// `face` must come from this library and not be used afterwards. Null is ignored.
void kf_face_free(struct KfFace *face);

// # Safety
// `face` must be a live handle; `out` must be writable.
enum KfStatus kf_face_integer_distance(const struct KfFace *face, uint64_t *out);

// Integer area (twice the Euclidean area in the plane lattice).
//
// # Safety
// `face` must be a live handle; `out` must be writable.
enum KfStatus kf_face_integer_area(const struct KfFace *face, uint64_t *out);

// Monte Carlo frequency; `workers == 0` picks the default worker count.
//
// # Safety
// `face` must be a live handle; `out` must be writable.
enum KfStatus kf_frequency_mc(const struct KfFace *face,
                              uint64_t samples,
                              uint64_t seed,
                              uint32_t workers,
                              struct KfFrequency *out);

// Exact frequency to relative tolerance `tol`; faces at distance 1 only.
//
// # Safety
// `face` must be a live handle; `out` must be writable.
enum KfStatus kf_frequency_exact(const struct KfFace *face, double tol, struct KfFrequency *out);

// `ln(1 + 1/(k(k+2)))`.
//
// # Safety
// `out` must be writable.
enum KfStatus kf_freq_1d_exact(int64_t k, double *out);

// Gauss-Kuzmin digit frequency `log2(1 + 1/(k(k+2)))`.
//
// # Safety
// `out` must be writable.
enum KfStatus kf_gk_frequency(int64_t k, double *out);

// Continued fraction of `num/den`. Writes up to `capacity` elements to `buf` and the
// full length to `len`; returns `BufferTooSmall` if `capacity` is short.
//
// # Safety
// `buf` must have room for `capacity` values (may be null when `capacity` is 0);
// `len` must be writable.
enum KfStatus kf_cf_expand(int64_t num,
                           int64_t den,
                           enum KfParity parity,
                           int64_t *buf,
                           uintptr_t capacity,
                           uintptr_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KLEIN_FREQ_H */
