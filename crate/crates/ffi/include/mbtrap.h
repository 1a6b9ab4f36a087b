#ifndef MBTRAP_H
#define MBTRAP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Regulator scheme selector.
 */
typedef enum MbtrapScheme {
  MBTRAP_SCHEME_HARD_CUTOFF = 0,
  MBTRAP_SCHEME_EXPONENTIAL = 1,
} MbtrapScheme;

/**
 * Result code of every call.
 */
typedef enum MbtrapStatus {
  MBTRAP_STATUS_OK = 0,
  MBTRAP_STATUS_NULL_POINTER = 1,
  MBTRAP_STATUS_DOMAIN = 2,
  MBTRAP_STATUS_CONVERGENCE = 3,
  MBTRAP_STATUS_RANK_DEFICIENT = 4,
  MBTRAP_STATUS_BRACKET = 5,
  MBTRAP_STATUS_BOUND_STATE = 6,
  MBTRAP_STATUS_UNREACHABLE = 7,
  MBTRAP_STATUS_INVALID = 8,
  MBTRAP_STATUS_PANIC = 9,
} MbtrapStatus;

/**
 * Opaque trap context.
 */
typedef struct MbtrapContext MbtrapContext;

/**
 * One interaction energy split by order, in units of ħω.
 */
typedef struct MbtrapBreakdown {
  double first;
  double second;
  double third;
  double effective_range;
  double total;
} MbtrapBreakdown;

typedef struct MbtrapEnergies {
  struct MbtrapBreakdown u2;
  struct MbtrapBreakdown u3;
  struct MbtrapBreakdown u4;
} MbtrapEnergies;

/**
 * The c coefficients at the context's ω/ω₀.
 */
typedef struct MbtrapCoefficients {
  double c2_1;
  double c2_2;
  double c2_3;
  double d2_12;
  double c3_2;
  double c3_3;
  double c3_3_uncertainty;
  double c4_3;
} MbtrapCoefficients;

/**
 * Zero-energy scattering length and effective range of a Gaussian
 * potential, lengths in the unit of `r0`.
 */
typedef struct MbtrapEffectiveRange {
  double a0;
  double r_eff;
  double volume;
} MbtrapEffectiveRange;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failed call on this thread; empty if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *mbtrap_last_error(void);

/**
 * Creates a context in oscillator units: `omega_ratio` = ω/ω₀ (may be
 * +infinity for ω₀ = 0), `xi` = a_t/σ(ω), `reff_ratio` = r_eff/σ(ω) and a
 * regulator with cutoff ratio ω_c/ω.
 */
enum MbtrapStatus mbtrap_context_new(double omega_ratio,
                                     double xi,
                                     double reff_ratio,
                                     enum MbtrapScheme scheme,
                                     double cutoff_ratio,
                                     struct MbtrapContext **out);

/**
 * Releases a context; null is ignored. Passing any other pointer that did
 * not come from [`mbtrap_context_new`], or freeing twice, is undefined.
 */
void mbtrap_context_free(struct MbtrapContext *ctx);

/**
 * U₂, U₃, U₄ in units of ħω.
 */
enum MbtrapStatus mbtrap_energies(const struct MbtrapContext *ctx, struct MbtrapEnergies *out);

/**
 * Ground-state energy of `n` bosons in units of ħω.
 */
enum MbtrapStatus mbtrap_total_energy(const struct MbtrapContext *ctx, uint64_t n, double *out);

enum MbtrapStatus mbtrap_coefficients(const struct MbtrapContext *ctx,
                                      struct MbtrapCoefficients *out);

/**
 * Exact relative energy of two bosons in ħω for a/σ = `xi`, |xi| < 1.
 */
enum MbtrapStatus mbtrap_exact_two_body_energy(double xi, double *out);

/**
 * Scattering length of V₀exp(-r²/(2r0²)) with `v0` = m·V₀/ħ².
 */
enum MbtrapStatus mbtrap_zero_energy_a(double v0, double r0, double *out);

/**
 * `v0` = m·V₀/ħ² producing scattering length `a` without a bound state.
 */
enum MbtrapStatus mbtrap_tune_depth(double a, double r0, double *out);

/**
 * Effective-range fit on the default low-energy grid.
 */
enum MbtrapStatus mbtrap_effective_range(double v0, double r0, struct MbtrapEffectiveRange *out);

/**
 * Library version as a static NUL-terminated string.
 */
const char *mbtrap_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MBTRAP_H */
