/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef AP_ATLAS_H
#define AP_ATLAS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status code of every fallible call.
typedef enum ApStatus {
  AP_STATUS_OK = 0,
  AP_STATUS_NULL_POINTER = 1,
  AP_STATUS_DOMAIN = 2,
  AP_STATUS_BRACKET = 3,
  AP_STATUS_CONVERGENCE = 4,
  AP_STATUS_OVERLAP = 5,
  AP_STATUS_FIT = 6,
  AP_STATUS_STEP_FAILURE = 7,
  AP_STATUS_PANIC = 8,
} ApStatus;

// Opaque handle to `Υ` for one `(a, m)`.
typedef struct ApProfile ApProfile;

// Opaque handle to a homogeneous solution.
typedef struct ApSolution ApSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or an empty string.
// The pointer stays valid until the next failing call on the same thread.
const char *ap_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *ap_version(void);

// `a = 2 / (2 - gamma)`.
//
// # Safety
// `a_out` must be valid for writes.
enum ApStatus ap_params_from_gamma(double gamma, double *a_out);

// `gamma = 2 - 2 / a`.
//
// # Safety
// `gamma_out` must be valid for writes.
enum ApStatus ap_params_from_a(double a, double *gamma_out);

// Builds `Υ` for `(a, m)`; `*out` receives a handle to free with
// [`ap_profile_free`].
//
// # Safety
// `out` must be valid for writes.
enum ApStatus ap_profile_new(double a, double m, struct ApProfile **out);

// # Safety
// `profile` must be NULL or a handle from [`ap_profile_new`] not yet freed.
void ap_profile_free(struct ApProfile *profile);

// # Safety
// `profile` must be a live handle and `out` valid for writes.
enum ApStatus ap_profile_t_star(const struct ApProfile *profile, double *out);

// # Safety
// `profile` must be a live handle and `out` valid for writes.
enum ApStatus ap_profile_y_star(const struct ApProfile *profile, double *out);

// `Υ(t)` for `t ∈ [0, 2 t_*]`.
//
// # Safety
// `profile` must be a live handle and `out` valid for writes.
enum ApStatus ap_profile_upsilon(const struct ApProfile *profile, double t, double *out);

// `Υ, Υ', Υ''` at an interior `t ∈ (0, 2 t_*)`.
//
// # Safety
// `profile` must be a live handle; the three outputs valid for writes.
enum ApStatus ap_profile_jet(const struct ApProfile *profile,
                             double t,
                             double *y,
                             double *dy,
                             double *d2y);

// `C_a |x|^a`, `a > 1`.
//
// # Safety
// `out` must be valid for writes.
enum ApStatus ap_solution_radial(double a, struct ApSolution **out);

// # Safety
// `out` must be valid for writes.
enum ApStatus ap_solution_half_plane(double a, struct ApSolution **out);

// # Safety
// `out` must be valid for writes.
enum ApStatus ap_solution_slab(double a, struct ApSolution **out);

// Resonant cone at `a = 1/2` with parameter `c ≠ 0`.
//
// # Safety
// `out` must be valid for writes.
enum ApStatus ap_solution_resonant_cone(double c, struct ApSolution **out);

// The implicit solution built on a profile; the profile is copied.
//
// # Safety
// `profile` must be a live handle and `out` valid for writes.
enum ApStatus ap_solution_implicit(const struct ApProfile *profile, struct ApSolution **out);

// `(x₂² + 2√m x₁x₂)/2` on its positivity set.
//
// # Safety
// `out` must be valid for writes.
enum ApStatus ap_solution_explicit_a2(double m, struct ApSolution **out);

// Glued acute cones: flap `i` has rotation `rotations[i]` and `cs[i] < 0`.
//
// # Safety
// `rotations` and `cs` must be valid for `n` reads; `out` valid for writes.
enum ApStatus ap_solution_multi_flap(const double *rotations,
                                     const double *cs,
                                     uintptr_t n,
                                     struct ApSolution **out);

// Rotates a solution counter-clockwise in place.
//
// # Safety
// `solution` must be a live handle.
enum ApStatus ap_solution_rotate(struct ApSolution *solution, double angle);

// Homogeneity degree of a solution.
//
// # Safety
// `solution` must be a live handle and `out` valid for writes.
enum ApStatus ap_solution_degree(const struct ApSolution *solution, double *out);

// `u(x₁, x₂)`, zero outside the positivity set.
//
// # Safety
// `solution` must be a live handle and `out` valid for writes.
enum ApStatus ap_solution_evaluate(const struct ApSolution *solution,
                                   double x1,
                                   double x2,
                                   double *out);

// Evaluates `n` points; `out[i] = u(x1[i], x2[i])`.
//
// # Safety
// `x1`, `x2` valid for `n` reads, `out` valid for `n` writes.
enum ApStatus ap_solution_evaluate_many(const struct ApSolution *solution,
                                        const double *x1,
                                        const double *x2,
                                        uintptr_t n,
                                        double *out);

// # Safety
// `solution` must be NULL or a live handle not yet freed.
void ap_solution_free(struct ApSolution *solution);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AP_ATLAS_H */
