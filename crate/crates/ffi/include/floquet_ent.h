#ifndef FLOQUET_ENT_H
#define FLOQUET_ENT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FeStatus {
  FE_STATUS_OK = 0,
  FE_STATUS_NULL_POINTER = 1,
  FE_STATUS_SIZE = 2,
  FE_STATUS_INDEX = 3,
  FE_STATUS_ARGUMENT = 4,
  FE_STATUS_VALIDATION = 5,
  FE_STATUS_RESOURCE = 6,
  FE_STATUS_NO_SPACING = 7,
  FE_STATUS_CONFIG = 8,
  FE_STATUS_IO = 9,
  FE_STATUS_PANIC = 10,
} FeStatus;

typedef enum FeDirection {
  FE_DIRECTION_X = 0,
  FE_DIRECTION_Y = 1,
  FE_DIRECTION_Z = 2,
} FeDirection;

typedef enum FeModel {
  FE_MODEL_U0 = 0,
  FE_MODEL_UX = 1,
} FeModel;

typedef enum FeBoundary {
  FE_BOUNDARY_OPEN = 0,
  FE_BOUNDARY_CLOSED = 1,
} FeBoundary;

// A one-period evolution operator.
typedef struct FeFloquet FeFloquet;

// A normalized chain state.
typedef struct FeState FeState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Every site in the `direction` eigenstate with eigenvalue `sign` (`+1` or `-1`).
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum FeStatus fe_state_polarized(size_t num_sites,
                                 enum FeDirection dir,
                                 int32_t sign,
                                 struct FeState **out);

// `(|α+…⟩ + |α−…⟩)/√2`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum FeStatus fe_state_ghz(size_t num_sites, enum FeDirection dir, struct FeState **out);

// Product of z-basis GHZ states on the two chain halves.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum FeStatus fe_state_psi_o(size_t num_sites, struct FeState **out);

// Wraps `2·2^L` interleaved doubles; the state must already be normalized.
//
// # Safety
// `re_im` must point to `len` readable doubles and `out` to writable storage for one handle.
enum FeStatus fe_state_from_amplitudes(size_t num_sites,
                                       const double *re_im,
                                       size_t len,
                                       struct FeState **out);

// Releases a state; null is ignored.
//
// # Safety
// `state` must be null or a handle returned by this library and not yet freed.
void fe_state_free(struct FeState *state);

// Number of sites, or 0 for a null handle.
//
// # Safety
// `state` must be null or a live handle.
size_t fe_state_num_sites(const struct FeState *state);

// Copies the amplitudes as interleaved `(re, im)` pairs; `len` must be at least `2·2^L`.
//
// # Safety
// `state` must be a live handle and `out` must point to `len` writable doubles.
enum FeStatus fe_state_amplitudes(const struct FeState *state, double *out, size_t len);

// `|⟨a|b⟩|²`.
//
// # Safety
// `a` and `b` must be live handles and `out` writable.
enum FeStatus fe_state_fidelity(const struct FeState *a, const struct FeState *b, double *out);

// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum FeStatus fe_floquet_new(enum FeModel model,
                             size_t num_sites,
                             enum FeBoundary boundary,
                             struct FeFloquet **out);

// Releases an operator; null is ignored.
//
// # Safety
// `floquet` must be null or a handle returned by this library and not yet freed.
void fe_floquet_free(struct FeFloquet *floquet);

// Applies `periods` periods to `state`, returning a new state handle.
//
// # Safety
// `floquet` and `state` must be live handles and `out` writable.
enum FeStatus fe_floquet_apply(const struct FeFloquet *floquet,
                               const struct FeState *state,
                               size_t periods,
                               struct FeState **out);

// Mean von Neumann entropy (bits) over all size-`l` subsets.
//
// # Safety
// `state` must be a live handle and `out` writable.
enum FeStatus fe_average_entanglement_entropy(const struct FeState *state, size_t l, double *out);

// Geometric measure; either output pointer may be null.
//
// # Safety
// `state` must be a live handle; non-null outputs must be writable.
enum FeStatus fe_geometric_measure(const struct FeState *state,
                                   size_t restarts,
                                   uint64_t seed,
                                   double *lambda,
                                   double *e_g);

// Maximized QFI over local directions and the certified entanglement depth; either output
// pointer may be null.
//
// # Safety
// `state` must be a live handle; non-null outputs must be writable.
enum FeStatus fe_maximize_qfi(const struct FeState *state,
                              size_t restarts,
                              uint64_t seed,
                              double *f_q,
                              size_t *depth);

// Largest QFI a `k`-producible state of `num_sites` sites can reach.
//
// # Safety
// `out` must be writable.
enum FeStatus fe_producibility_bound(size_t num_sites, size_t k, size_t *out);

// Message for the most recent failure on this thread, or null. Valid until the next call
// into this library from the same thread.
const char *fe_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *fe_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLOQUET_ENT_H */
