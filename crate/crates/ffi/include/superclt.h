/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef SUPERCLT_H
#define SUPERCLT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Regime of a function, by the classes of its nonzero eigen-levels.
 */
typedef enum SupercltRegime {
  SUPERCLT_REGIME_LARGE = 0,
  SUPERCLT_REGIME_CRITICAL = 1,
  SUPERCLT_REGIME_SMALL = 2,
  SUPERCLT_REGIME_MIXED = 3,
  SUPERCLT_REGIME_ZERO = 4,
} SupercltRegime;

/**
 * Result code of every call.
 */
typedef enum SupercltStatus {
  SUPERCLT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SUPERCLT_STATUS_NULL_POINTER = 1,
  /**
   * Invalid model, function, plan or argument.
   */
  SUPERCLT_STATUS_VALIDATION = 2,
  /**
   * Population cap or replica failures.
   */
  SUPERCLT_STATUS_RESOURCE = 3,
  /**
   * Not enough surviving replicas to verify.
   */
  SUPERCLT_STATUS_INSUFFICIENT_DATA = 4,
  SUPERCLT_STATUS_IO = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  SUPERCLT_STATUS_PANIC = 6,
} SupercltStatus;

/**
 * Simulated replicas with their plan and registered functions.
 */
typedef struct SupercltEnsemble SupercltEnsemble;

/**
 * A finite eigen-expansion Σ a_n φ_n.
 */
typedef struct SupercltFunction SupercltFunction;

/**
 * A super-OU model.
 */
typedef struct SupercltModel SupercltModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next call into this library from the same thread.
 */
const char *superclt_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *superclt_version(void);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void superclt_string_free(char *s);

/**
 * Creates a model from its parameters: dimension, OU drift c, diffusion
 * σ², branching coefficients a and b, and branching rate β.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SupercltStatus superclt_model_new(uint32_t dimension,
                                       double drift_c,
                                       double diffusion,
                                       double branch_a,
                                       double branch_b,
                                       double branch_rate,
                                       struct SupercltModel **out);

/**
 * Creates a model from the JSON "model" object of a config file.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SupercltStatus superclt_model_from_json(const char *json, struct SupercltModel **out);

/**
 * # Safety
 * `model` must come from this library and not have been freed. NULL is ignored.
 */
void superclt_model_free(struct SupercltModel *model);

/**
 * λ_k of eigen-level `k` (1-based).
 *
 * # Safety
 * Pointers must be valid.
 */
enum SupercltStatus superclt_model_eigenvalue(const struct SupercltModel *model,
                                              uint32_t k,
                                              double *out);

/**
 * Number of eigenfunctions at level `k` (1-based).
 *
 * # Safety
 * Pointers must be valid.
 */
enum SupercltStatus superclt_model_multiplicity(const struct SupercltModel *model,
                                                uint32_t k,
                                                size_t *out);

/**
 * Creates the zero function.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SupercltStatus superclt_function_new(struct SupercltFunction **out);

/**
 * Adds `value` to the coefficient of the eigenfunction with per-coordinate
 * Hermite orders `orders[0..dim]`.
 *
 * # Safety
 * `f` must be a valid handle and `orders` must point to `dim` values.
 */
enum SupercltStatus superclt_function_add_term(struct SupercltFunction *f,
                                               const uint32_t *orders,
                                               size_t dim,
                                               double value);

/**
 * # Safety
 * `f` must come from this library and not have been freed. NULL is ignored.
 */
void superclt_function_free(struct SupercltFunction *f);

/**
 * f(x) for a point `x[0..dim]`.
 *
 * # Safety
 * Handles must be valid and `x` must point to `dim` values.
 */
enum SupercltStatus superclt_function_eval(const struct SupercltModel *model,
                                           const struct SupercltFunction *f,
                                           const double *x,
                                           size_t dim,
                                           double *out);

/**
 * Regime of `f` and its leading level γ(f); γ is 0 for the zero function.
 *
 * # Safety
 * Handles and out-pointers must be valid.
 */
enum SupercltStatus superclt_classify(const struct SupercltModel *model,
                                      const struct SupercltFunction *f,
                                      enum SupercltRegime *out_regime,
                                      uint32_t *out_gamma);

/**
 * σ²_f of a small-regime function.
 *
 * # Safety
 * Handles and `out` must be valid.
 */
enum SupercltStatus superclt_sigma2(const struct SupercltModel *model,
                                    const struct SupercltFunction *f,
                                    double *out);

/**
 * ρ²_h of a critical-regime function.
 *
 * # Safety
 * Handles and `out` must be valid.
 */
enum SupercltStatus superclt_rho2(const struct SupercltModel *model,
                                  const struct SupercltFunction *f,
                                  double *out);

/**
 * β²_g of a large-regime function.
 *
 * # Safety
 * Handles and `out` must be valid.
 */
enum SupercltStatus superclt_beta2(const struct SupercltModel *model,
                                   const struct SupercltFunction *f,
                                   double *out);

/**
 * η²(f, x) of a function whose leading level is large.
 *
 * # Safety
 * Handles and `out` must be valid and `x` must point to `dim` values.
 */
enum SupercltStatus superclt_eta2(const struct SupercltModel *model,
                                  const struct SupercltFunction *f,
                                  const double *x,
                                  size_t dim,
                                  double *out);

/**
 * E⟨f, X_t⟩ started from a unit point mass at `x`.
 *
 * # Safety
 * Handles and `out` must be valid and `x` must point to `dim` values.
 */
enum SupercltStatus superclt_mean(const struct SupercltModel *model,
                                  const struct SupercltFunction *f,
                                  const double *x,
                                  size_t dim,
                                  double t,
                                  double *out);

/**
 * Var⟨f, X_t⟩ started from a unit point mass at `x`.
 *
 * # Safety
 * Handles and `out` must be valid and `x` must point to `dim` values.
 */
enum SupercltStatus superclt_variance(const struct SupercltModel *model,
                                      const struct SupercltFunction *f,
                                      const double *x,
                                      size_t dim,
                                      double t,
                                      double *out);

/**
 * Simulates the ensemble described by `plan_json` (the "sim" object of a
 * config file), recording the `count` functions `functions[i]` under
 * `names[i]`. `threads` = 0 uses the default pool.
 *
 * # Safety
 * `plan_json` and every `names[i]` must be NUL-terminated strings,
 * `names` and `functions` must point to `count` entries, and `out` must be
 * a valid pointer.
 */
enum SupercltStatus superclt_ensemble_run(const struct SupercltModel *model,
                                          const char *plan_json,
                                          const char *const *names,
                                          const struct SupercltFunction *const *functions,
                                          size_t count,
                                          size_t threads,
                                          struct SupercltEnsemble **out);

/**
 * # Safety
 * `ens` must come from this library and not have been freed. NULL is ignored.
 */
void superclt_ensemble_free(struct SupercltEnsemble *ens);

/**
 * Numbers of replicas, checkpoints and registered functions.
 *
 * # Safety
 * All pointers must be valid.
 */
enum SupercltStatus superclt_ensemble_shape(const struct SupercltEnsemble *ens,
                                            size_t *out_replicas,
                                            size_t *out_checkpoints,
                                            size_t *out_functions);

/**
 * ⟨f_function, X_t⟩ and survival of one replica at one checkpoint.
 *
 * # Safety
 * All pointers must be valid.
 */
enum SupercltStatus superclt_ensemble_readout(const struct SupercltEnsemble *ens,
                                              size_t replica,
                                              size_t checkpoint,
                                              size_t function,
                                              double *out_value,
                                              bool *out_survived);

/**
 * Horizon estimate of W_∞ for one replica.
 *
 * # Safety
 * All pointers must be valid.
 */
enum SupercltStatus superclt_ensemble_w_inf(const struct SupercltEnsemble *ens,
                                            size_t replica,
                                            double *out);

/**
 * Runs the verification suites with default settings and returns the
 * report as a JSON string to be freed with [`superclt_string_free`]. The
 * joint CLT check runs when `f`, `h` and `g` are all non-NULL; `t` must
 * then be a checkpoint.
 *
 * # Safety
 * Handles must be valid or NULL as described; `out_json` must be valid.
 */
enum SupercltStatus superclt_ensemble_verify(const struct SupercltEnsemble *ens,
                                             const struct SupercltFunction *f,
                                             const struct SupercltFunction *h,
                                             const struct SupercltFunction *g,
                                             double t,
                                             char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUPERCLT_H */
