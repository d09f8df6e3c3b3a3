#ifndef JCM_H
#define JCM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum JcmStatus {
  JCM_STATUS_OK = 0,
  JCM_STATUS_NULL_POINTER = 1,
  JCM_STATUS_INVALID_ARGUMENT = 2,
  JCM_STATUS_TAIL_TOO_HEAVY = 3,
  JCM_STATUS_BUFFER_TOO_SMALL = 4,
  JCM_STATUS_PARSE = 5,
  JCM_STATUS_PANIC = 6,
} JcmStatus;

typedef enum JcmMode {
  JCM_MODE_EXACT = 0,
  JCM_MODE_QUADRATIC = 1,
} JcmMode;

typedef struct JcmJointState JcmJointState;

typedef struct JcmModel JcmModel;

typedef struct JcmPhaseGrid JcmPhaseGrid;

/**
 * Field diagnostics at `pi/4 + delta_r`.
 */
typedef struct JcmCatDiagnostics {
  double tau;
  double entropy;
  double fidelity_ground;
  double fidelity_excited;
  double field_fidelity;
  double cat_norm_deviation;
} JcmCatDiagnostics;

/**
 * Reduced atomic density matrix in the basis `(|g>, |e>)`.
 */
typedef struct JcmAtomDensity {
  double rho11;
  double rho22;
  double rho12_re;
  double rho12_im;
} JcmAtomDensity;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message on this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length excluding the NUL.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t jcm_last_error_message(char *buf, size_t len);

/**
 * `sqrt((n+1)...(n+k))` or, for `k = 4` in quadratic mode, `n^2 + 5n + 5`;
 * `mode` is a [`JcmMode`] value.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum JcmStatus jcm_rabi_frequency(size_t n, uint32_t k, uint32_t mode, double *out);

/**
 * Dip offset `delta_r = r pi / (16 nbar)` and the time `pi/4 + delta_r`.
 *
 * # Safety
 * `delta` and `tau` must be valid for writes.
 */
enum JcmStatus jcm_dip_offset(int64_t r, double nbar, double *delta, double *tau);

/**
 * Builds a model for the initial state `|e> (x) |alpha>`; `mode` is a [`JcmMode`] value.
 *
 * # Safety
 * `out` must be valid for writes. The handle must be released with [`jcm_model_free`].
 */
enum JcmStatus jcm_model_new(uint32_t k,
                             double alpha_re,
                             double alpha_im,
                             size_t cutoff,
                             uint32_t mode,
                             double tail_tol,
                             struct JcmModel **out);

/**
 * # Safety
 * `model` must be null or a handle from [`jcm_model_new`] not yet freed.
 */
void jcm_model_free(struct JcmModel *model);

/**
 * Fock cutoff `N`; buffers for per-photon-number data need `N + 1` entries.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum JcmStatus jcm_model_cutoff(const struct JcmModel *model, size_t *out);

/**
 * Joint state at scaled time `tau`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes. Release the
 * result with [`jcm_state_free`].
 */
enum JcmStatus jcm_model_evolve(const struct JcmModel *model,
                                double tau,
                                struct JcmJointState **out);

/**
 * Joint state at `tau = num pi / den`, with phases reduced exactly.
 *
 * # Safety
 * As [`jcm_model_evolve`].
 */
enum JcmStatus jcm_model_evolve_pi(const struct JcmModel *model,
                                   int64_t num,
                                   int64_t den,
                                   struct JcmJointState **out);

/**
 * Joint state at a symbolic time such as `"pi/8-pi/24000"`.
 *
 * # Safety
 * `expr` must be a NUL-terminated string; otherwise as [`jcm_model_evolve`].
 */
enum JcmStatus jcm_model_evolve_expr(const struct JcmModel *model,
                                     const char *expr,
                                     struct JcmJointState **out);

/**
 * Atomic inversion `W(tau)`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum JcmStatus jcm_model_inversion(const struct JcmModel *model, double tau, double *out);

/**
 * Cat-state diagnostics at `pi/4 + delta_r` for odd `r`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum JcmStatus jcm_model_diagnose_cat(const struct JcmModel *model,
                                      int64_t r,
                                      struct JcmCatDiagnostics *out);

/**
 * # Safety
 * `state` must be null or a handle from a `jcm_model_evolve*` call not yet freed.
 */
void jcm_state_free(struct JcmJointState *state);

/**
 * Photon-number distribution; `buf` needs `cutoff + 1` entries.
 *
 * # Safety
 * `state` must be a live handle and `buf` valid for `len` writes.
 */
enum JcmStatus jcm_state_pnd(const struct JcmJointState *state, double *buf, size_t len);

/**
 * # Safety
 * `state` must be a live handle and `out` valid for writes.
 */
enum JcmStatus jcm_state_atom_density(const struct JcmJointState *state,
                                      struct JcmAtomDensity *out);

/**
 * Von Neumann entropy of the field (equal to that of the atom).
 *
 * # Safety
 * `state` must be a live handle and `out` valid for writes.
 */
enum JcmStatus jcm_state_entropy(const struct JcmJointState *state, double *out);

/**
 * Husimi Q-function of the field on an `nx` by `ny` grid.
 *
 * # Safety
 * `state` must be a live handle and `out` valid for writes. Release the
 * result with [`jcm_grid_free`].
 */
enum JcmStatus jcm_state_q_grid(const struct JcmJointState *state,
                                double re_min,
                                double re_max,
                                double im_min,
                                double im_max,
                                size_t nx,
                                size_t ny,
                                struct JcmPhaseGrid **out);

/**
 * # Safety
 * `grid` must be null or a handle from [`jcm_state_q_grid`] not yet freed.
 */
void jcm_grid_free(struct JcmPhaseGrid *grid);

/**
 * Grid values row by row (`values[iy * nx + ix]`); `buf` needs `nx * ny` entries.
 *
 * # Safety
 * `grid` must be a live handle and `buf` valid for `len` writes.
 */
enum JcmStatus jcm_grid_values(const struct JcmPhaseGrid *grid, double *buf, size_t len);

/**
 * Sum of the grid values times the cell area.
 *
 * # Safety
 * `grid` must be a live handle and `out` valid for writes.
 */
enum JcmStatus jcm_grid_riemann_sum(const struct JcmPhaseGrid *grid, double *out);

/**
 * Number of 4-connected regions above `threshold_fraction` of the peak.
 *
 * # Safety
 * `grid` must be a live handle and `out` valid for writes.
 */
enum JcmStatus jcm_grid_count_components(const struct JcmPhaseGrid *grid,
                                         double threshold_fraction,
                                         size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JCM_H */
