#ifndef BOXANNEAL_H
#define BOXANNEAL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes shared by every entry point.
 */
typedef enum BxStatus {
  /**
   * Success.
   */
  BxOk = 0,
  /**
   * A pointer argument was null.
   */
  BxNullPointer = 1,
  /**
   * Parameters violate a domain constraint.
   */
  BxInvalidArgument = 2,
  /**
   * A numerical routine failed to converge or certify its result.
   */
  BxNumericalFailure = 3,
} BxStatus;

/**
 * Opaque multi-well box potential.
 */
typedef struct BxPotential BxPotential;

/**
 * Result of a single annealing run.
 */
typedef struct BxAnnealResult {
  /**
   * Final energy expectation `⟨H(s_f)⟩`.
   */
  double final_energy;
  /**
   * Residual above the reference level at `s_f`.
   */
  double residual;
  /**
   * Reference level index.
   */
  uintptr_t e_ref_level;
  /**
   * Reference level energy.
   */
  double e_ref_energy;
  /**
   * `|‖ψ‖ − 1|` accumulated over the run.
   */
  double norm_drift;
  /**
   * Number of split-operator steps taken.
   */
  uint64_t steps;
} BxAnnealResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent error on this thread. The pointer stays valid
 * until the next failing call on the same thread; never free it.
 */
const char *bx_last_error_message(void);

/**
 * Library version as a static UTF-8 string; never free it.
 */
const char *bx_version(void);

/**
 * Creates a box potential with `mu` cosine periods, envelope amplitude `a`,
 * and box width `l`. On success writes a handle to `out`.
 *
 * # Safety
 * `out` must be a valid pointer. The handle must be released with
 * [`bx_potential_free`].
 */
enum BxStatus bx_potential_new(uint32_t mu, double a, double l, struct BxPotential **out);

/**
 * Evaluates `V(x)`; `x` must lie inside the box.
 *
 * # Safety
 * `p` must be a live handle from [`bx_potential_new`]; `out` must be valid.
 */
enum BxStatus bx_potential_eval(const struct BxPotential *p, double x, double *out);

/**
 * Number of potential minima (wells plus walls).
 *
 * # Safety
 * `p` must be a live handle; `out` must be valid.
 */
enum BxStatus bx_potential_minima_count(const struct BxPotential *p, uint32_t *out);

/**
 * Releases a potential handle. Passing null is a no-op.
 *
 * # Safety
 * `p` must be null or a handle not freed before.
 */
void bx_potential_free(struct BxPotential *p);

/**
 * Computes the lowest `levels` eigenvalues of `H(s)` in an `n_dim`-function
 * basis and writes them, ascending, into `out` (capacity `levels`).
 *
 * # Safety
 * `p` must be a live handle; `out` must point to at least `levels` doubles.
 */
enum BxStatus bx_spectrum_lowest(const struct BxPotential *p,
                                 double s,
                                 uintptr_t n_dim,
                                 uintptr_t levels,
                                 double *out);

/**
 * Anneals the ground state of `H(s_i)` to `s_f` over time `t_total` with the
 * linear schedule and writes the outcome to `out`. `accuracy` in (0, 1]
 * scales the step size (smaller is more accurate); pass 0 for the default.
 * The reference level is chosen automatically (lowest state in the wells
 * adjacent to the center for `a > 0`, the ground state otherwise).
 *
 * # Safety
 * `p` must be a live handle; `out` must be valid.
 */
enum BxStatus bx_anneal(const struct BxPotential *p,
                        uintptr_t n_dim,
                        double s_i,
                        double s_f,
                        double t_total,
                        double accuracy,
                        struct BxAnnealResult *out);

/**
 * Deep-limit ground-state energy `ħπμ/(2L√(2ms))` above a well.
 *
 * # Safety
 * `out` must be valid.
 */
enum BxStatus bx_oracle_zero_point(uint32_t mu, double s, double l, double *out);

/**
 * Closed-form residual-energy envelope for a linear annealing schedule.
 *
 * # Safety
 * `out` must be valid.
 */
enum BxStatus bx_oracle_adiabatic_residual(uint32_t mu,
                                           double l,
                                           double s_i,
                                           double s_f,
                                           double t_total,
                                           double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BOXANNEAL_H */
