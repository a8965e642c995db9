#ifndef QCF_H
#define QCF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum QcfStatus {
  QCF_STATUS_OK = 0,
  QCF_STATUS_NULL_POINTER = 1,
  QCF_STATUS_INVALID_ARGUMENT = 2,
  QCF_STATUS_DIMENSION_MISMATCH = 3,
  QCF_STATUS_NOT_NORMALIZED = 4,
  QCF_STATUS_INVALID_DECOMPOSITION = 5,
  QCF_STATUS_ZERO_SELECTION_PROBABILITY = 6,
  QCF_STATUS_ORTHOGONAL_SELECTION = 7,
  QCF_STATUS_GRID_TOO_NARROW = 8,
  QCF_STATUS_INVALID_CONSTRAINT = 9,
  QCF_STATUS_UNIVERSE_TOO_LARGE = 10,
  QCF_STATUS_UNKNOWN_SCENARIO = 11,
  QCF_STATUS_BUFFER_TOO_SMALL = 12,
  QCF_STATUS_PANIC = 99,
} QcfStatus;

/**
 * Parity constraint set handle. Setting indices refer to the universe in
 * the order it was given to `qcf_constraint_set_new`.
 */
typedef struct QcfConstraintSet QcfConstraintSet;

/**
 * Projector decomposition handle.
 */
typedef struct QcfDecomposition QcfDecomposition;

/**
 * Pre/post-selected ensemble handle.
 */
typedef struct QcfEnsemble QcfEnsemble;

typedef struct QcfPointerReport {
  double coupling;
  double pointer_mean;
  double postselection_probability;
  double inferred_weak_value_re;
} QcfPointerReport;

typedef struct QcfMachZehnder {
  double p_dark;
  double p_bright;
  double p_absorbed;
} QcfMachZehnder;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Description of the last failure on this thread, or an empty string.
 * Valid until the next qcf call on the same thread.
 */
const char *qcf_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qcf_version(void);

/**
 * Builds an ensemble from `dim` interleaved complex amplitudes for each of
 * `pre` and `post`. Both must be normalized.
 *
 * # Safety
 * `pre` and `post` must point to `2 * dim` readable doubles; `out` must be
 * writable.
 */
enum QcfStatus qcf_ensemble_new(uintptr_t dim,
                                const double *pre,
                                const double *post,
                                struct QcfEnsemble **out);

/**
 * The three-box ensemble.
 *
 * # Safety
 * `out` must be writable.
 */
enum QcfStatus qcf_ensemble_three_box(struct QcfEnsemble **out);

/**
 * # Safety
 * `ens` must be null or a handle from a qcf ensemble constructor, not yet freed.
 */
void qcf_ensemble_free(struct QcfEnsemble *ens);

/**
 * # Safety
 * `ens` must be a live handle.
 */
uintptr_t qcf_ensemble_dim(const struct QcfEnsemble *ens);

/**
 * `<post|pre>`.
 *
 * # Safety
 * `ens` must be a live handle; `re` and `im` must be writable.
 */
enum QcfStatus qcf_ensemble_overlap(const struct QcfEnsemble *ens, double *re, double *im);

/**
 * Builds a projector decomposition from `n_branches` branches. Projector
 * `k` occupies doubles `[2*dim*dim*k, 2*dim*dim*(k+1))` of `projectors`.
 *
 * # Safety
 * `label` and each of the `n_branches` entries of `outcomes` must be
 * NUL-terminated strings; `eigenvalues` must hold `n_branches` doubles and
 * `projectors` `2 * dim * dim * n_branches` doubles; `out` must be writable.
 */
enum QcfStatus qcf_decomposition_new(const char *label,
                                     uintptr_t dim,
                                     uintptr_t n_branches,
                                     const char *const *outcomes,
                                     const double *eigenvalues,
                                     const double *projectors,
                                     struct QcfDecomposition **out);

/**
 * Box observables: 0, 1, 2 open box A, B or C alone; 3 opens all three.
 *
 * # Safety
 * `out` must be writable.
 */
enum QcfStatus qcf_decomposition_box(uintptr_t index, struct QcfDecomposition **out);

/**
 * # Safety
 * `dec` must be null or a live handle.
 */
void qcf_decomposition_free(struct QcfDecomposition *dec);

/**
 * # Safety
 * `dec` must be a live handle.
 */
uintptr_t qcf_decomposition_branch_count(const struct QcfDecomposition *dec);

/**
 * Single-time Born probabilities, in branch order.
 *
 * # Safety
 * `state` must hold `2 * dim` doubles, `dec` must be a live handle and
 * `probabilities` must have room for `capacity` doubles.
 */
enum QcfStatus qcf_born(uintptr_t dim,
                        const double *state,
                        const struct QcfDecomposition *dec,
                        double *probabilities,
                        uintptr_t capacity);

/**
 * Two-time outcome probabilities, in branch order.
 *
 * # Safety
 * `ens` and `dec` must be live handles; `probabilities` must have room for
 * `capacity` doubles.
 */
enum QcfStatus qcf_abl(const struct QcfEnsemble *ens,
                       const struct QcfDecomposition *dec,
                       double *probabilities,
                       uintptr_t capacity);

/**
 * Sets `*found` and, when true, the certain branch index and eigenvalue.
 *
 * # Safety
 * `ens` and `dec` must be live handles; the out pointers must be writable.
 */
enum QcfStatus qcf_infer_element_of_reality(const struct QcfEnsemble *ens,
                                            const struct QcfDecomposition *dec,
                                            double tol,
                                            bool *found,
                                            uintptr_t *branch_index,
                                            double *eigenvalue);

/**
 * Weak value of a `dim x dim` operator.
 *
 * # Safety
 * `ens` must be a live handle, `op` must hold `2 * dim * dim` doubles and
 * `re`, `im` must be writable.
 */
enum QcfStatus qcf_weak_value(const struct QcfEnsemble *ens,
                              uintptr_t dim,
                              const double *op,
                              double *re,
                              double *im);

/**
 * Pointer-model weak measurement. Pass `half_width <= 0` or `points == 0`
 * for the default grid.
 *
 * # Safety
 * `ens` and `dec` must be live handles; `out` must be writable.
 */
enum QcfStatus qcf_simulate_pointer(const struct QcfEnsemble *ens,
                                    const struct QcfDecomposition *dec,
                                    double coupling,
                                    double sigma,
                                    double half_width,
                                    uintptr_t points,
                                    struct QcfPointerReport *out);

/**
 * Empty constraint set over `n_settings` settings `(parties[i], observables[i])`.
 *
 * # Safety
 * `parties` and `observables` must each hold `n_settings` NUL-terminated
 * strings; `out` must be writable.
 */
enum QcfStatus qcf_constraint_set_new(uintptr_t n_settings,
                                      const char *const *parties,
                                      const char *const *observables,
                                      struct QcfConstraintSet **out);

/**
 * The four GHZ parity constraints over `{A, B, C} x {x, y}`, universe in
 * sorted order `A_x, A_y, B_x, B_y, C_x, C_y`.
 *
 * # Safety
 * `out` must be writable.
 */
enum QcfStatus qcf_constraint_set_ghz(struct QcfConstraintSet **out);

/**
 * Appends the constraint `prod settings[indices] = required` (+1 or -1).
 *
 * # Safety
 * `cs` must be a live handle and `indices` must hold `n` values.
 */
enum QcfStatus qcf_constraint_set_add(struct QcfConstraintSet *cs,
                                      uintptr_t n,
                                      const uintptr_t *indices,
                                      int32_t required);

/**
 * # Safety
 * `cs` must be null or a live handle.
 */
void qcf_constraint_set_free(struct QcfConstraintSet *cs);

/**
 * Exhaustive search. When satisfiable and `first` is non-null, writes the
 * first assignment (+1/-1) in the caller's setting order; `first` must then
 * have room for the universe size.
 *
 * # Safety
 * `cs` must be a live handle; `satisfiable` and `count` must be writable;
 * `first` must be null or hold one int per setting.
 */
enum QcfStatus qcf_lhv_search(const struct QcfConstraintSet *cs,
                              bool *satisfiable,
                              uint64_t *count,
                              int32_t *first);

/**
 * Writes the parity certificate's constraint indices and sets `*len`
 * (0 when there is none).
 *
 * # Safety
 * `cs` must be a live handle, `indices` must have room for `capacity`
 * values and `len` must be writable.
 */
enum QcfStatus qcf_parity_certificate(const struct QcfConstraintSet *cs,
                                      uintptr_t *indices,
                                      uintptr_t capacity,
                                      uintptr_t *len);

/**
 * Interaction-free measurement probabilities.
 *
 * # Safety
 * `out` must be writable.
 */
enum QcfStatus qcf_mach_zehnder(bool obstacle_present, struct QcfMachZehnder *out);

/**
 * JSON report for a named scenario (`ghz`, `three-box`, `ifm`). The string
 * must be released with `qcf_string_free`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` writable.
 */
enum QcfStatus qcf_run_named_json(const char *name, double tol, double coupling, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void qcf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCF_H */
