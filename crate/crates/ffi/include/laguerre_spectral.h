#ifndef LAGUERRE_SPECTRAL_H
#define LAGUERRE_SPECTRAL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LsDecayClass {
  LS_DECAY_CLASS_RAPID = 0,
  LS_DECAY_CLASS_SLOW = 1,
  LS_DECAY_CLASS_DIVERGENT = 2,
} LsDecayClass;

/**
 * Result of a fallible call.
 */
typedef enum LsStatus {
  LS_STATUS_OK = 0,
  LS_STATUS_NULL_POINTER = 1,
  /**
   * Inconsistent arguments: dimensions, bounds, rule too small, order.
   */
  LS_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Malformed JSON or text input.
   */
  LS_STATUS_PARSE = 3,
  LS_STATUS_IO = 4,
  LS_STATUS_RUNTIME = 5,
  LS_STATUS_PANIC = 6,
} LsStatus;

/**
 * Coefficient tensor.
 */
typedef struct LsCoefficients LsCoefficients;

/**
 * Kernel coefficient matrix.
 */
typedef struct LsKernel LsKernel;

/**
 * Gauss–Laguerre rule.
 */
typedef struct LsRule LsRule;

/**
 * `f(x, dims, user_data)`; may be called concurrently from several threads.
 */
typedef double (*LsEvalFn)(const double *x, size_t dims, void *user_data);

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread ("" if none). Owned by
 * the library.
 */
const char *ls_last_error(void);

/**
 * Library version, static storage.
 */
const char *ls_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 */
void ls_string_free(char *s);

/**
 * `e^{-x/2} L_n(x)`.
 */
double ls_laguerre_fn(size_t n, double x);

/**
 * `(d/dx)^p [e^{-x/2} L_n(x)]`.
 */
double ls_laguerre_fn_deriv(size_t n, size_t p, double x);

/**
 * `m`-point Gauss–Laguerre rule for plain `dx` integrals on `(0, ∞)`.
 */
enum LsStatus ls_rule_new(size_t m, struct LsRule **out);

void ls_rule_free(struct LsRule *rule);

/**
 * Number of nodes, or 0 for a null handle.
 */
size_t ls_rule_len(const struct LsRule *rule);

/**
 * Copies the nodes into `out` (capacity `cap`).
 */
enum LsStatus ls_rule_nodes(const struct LsRule *rule, double *out, size_t cap);

/**
 * Copies the `dx` weights into `out` (capacity `cap`).
 */
enum LsStatus ls_rule_weights(const struct LsRule *rule, double *out, size_t cap);

/**
 * Tensor with degree bounds `bounds[0..dims]` and row-major `values`.
 */
enum LsStatus ls_coeffs_new(size_t dims,
                            const size_t *bounds,
                            const double *values,
                            size_t n_values,
                            struct LsCoefficients **out);

void ls_coeffs_free(struct LsCoefficients *c);

/**
 * Number of axes, or 0 for a null handle.
 */
size_t ls_coeffs_dims(const struct LsCoefficients *c);

/**
 * Number of stored values, or 0 for a null handle.
 */
size_t ls_coeffs_len(const struct LsCoefficients *c);

/**
 * Copies the degree bounds into `out` (capacity `cap`).
 */
enum LsStatus ls_coeffs_bounds(const struct LsCoefficients *c, size_t *out, size_t cap);

/**
 * Copies the row-major values into `out` (capacity `cap`).
 */
enum LsStatus ls_coeffs_values(const struct LsCoefficients *c, double *out, size_t cap);

/**
 * Parses `{"dims", "degree_bounds", "values"}`.
 */
enum LsStatus ls_coeffs_from_json(const char *json, struct LsCoefficients **out);

/**
 * Serializes to JSON; free the result with [`ls_string_free`].
 */
enum LsStatus ls_coeffs_to_json(const struct LsCoefficients *c, char **out);

/**
 * Coefficients from samples `f(x_j)` on the row-major `m^dims` node grid
 * of `rule`.
 */
enum LsStatus ls_analyze_samples(const double *samples,
                                 size_t n_samples,
                                 size_t dims,
                                 const size_t *bounds,
                                 const struct LsRule *rule,
                                 struct LsCoefficients **out);

/**
 * Coefficients of a caller-supplied function. The callback must be safe
 * to invoke concurrently with the same `user_data`.
 */
enum LsStatus ls_analyze_fn(LsEvalFn f,
                            void *user_data,
                            size_t dims,
                            const size_t *bounds,
                            const struct LsRule *rule,
                            struct LsCoefficients **out);

/**
 * `Σ c_n ℒ_n(x)` at a point of the closed orthant.
 */
enum LsStatus ls_synthesize(const struct LsCoefficients *c,
                            const double *x,
                            size_t dims,
                            double *out);

/**
 * Coefficients of `f ∗ g` on the common box of `a` and `b`.
 */
enum LsStatus ls_convolve(const struct LsCoefficients *a,
                          const struct LsCoefficients *b,
                          struct LsCoefficients **out);

/**
 * Coefficients of `E^power f`.
 */
enum LsStatus ls_apply_e(const struct LsCoefficients *c,
                         uint32_t power,
                         struct LsCoefficients **out);

/**
 * Decay class of a coefficient tensor.
 */
enum LsStatus ls_classify(const struct LsCoefficients *c, uint32_t k_max, enum LsDecayClass *out);

/**
 * Full decay report as JSON; free with [`ls_string_free`].
 */
enum LsStatus ls_decay_report_json(const struct LsCoefficients *c, uint32_t k_max, char **out);

/**
 * Extension weights `c_1..c_order` (reflection scales are `1..order`).
 */
enum LsStatus ls_seeley_weights(size_t order, double *out, size_t cap);

void ls_kernel_free(struct LsKernel *k);

/**
 * Parses `{"m", "n", "row_bounds", "col_bounds", "entries"}`.
 */
enum LsStatus ls_kernel_from_json(const char *json, struct LsKernel **out);

/**
 * Serializes to JSON; free the result with [`ls_string_free`].
 */
enum LsStatus ls_kernel_to_json(const struct LsKernel *k, char **out);

/**
 * Rank-one kernel `u ⊗ v`.
 */
enum LsStatus ls_kernel_tensor(const struct LsCoefficients *u,
                               const struct LsCoefficients *v,
                               struct LsKernel **out);

/**
 * `B a`; `a` may be smaller than the kernel's column box.
 */
enum LsStatus ls_kernel_apply(const struct LsKernel *k,
                              const struct LsCoefficients *a,
                              struct LsCoefficients **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LAGUERRE_SPECTRAL_H */
