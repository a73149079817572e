/* C interface to the opnum-lab composition-operator laboratory. */

#ifndef OPNUM_LAB_H
#define OPNUM_LAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum OpnumStatus {
  OpnumStatus_Ok = 0,
  OpnumStatus_NullPointer = 1,
  OpnumStatus_InvalidArgument = 2,
  OpnumStatus_InvalidJson = 3,
  OpnumStatus_OutsideDomain = 4,
  OpnumStatus_BranchCut = 5,
  OpnumStatus_Divergent = 6,
  OpnumStatus_Unbounded = 7,
  OpnumStatus_DecompositionFailed = 8,
  OpnumStatus_InsufficientData = 9,
  OpnumStatus_InternalError = 10,
} OpnumStatus;

/**
 * Decay-law families for `opnum_fit_decay`.
 */
typedef enum OpnumDecayFamily {
  OpnumDecayFamily_Exponential = 0,
  OpnumDecayFamily_SqrtExponential = 1,
  OpnumDecayFamily_CubeRootExponential = 2,
  OpnumDecayFamily_SqrtOverLog = 3,
  OpnumDecayFamily_LinearOverLog = 4,
} OpnumDecayFamily;

/**
 * Opaque handle to a computed singular value spectrum.
 */
typedef struct OpnumSpectrum OpnumSpectrum;

/**
 * Opaque handle to an analytic self-map / weight description.
 */
typedef struct OpnumSymbol OpnumSymbol;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent error on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *opnum_last_error_message(void);

/**
 * Parse a symbol from its JSON expression tree.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum OpnumStatus opnum_symbol_parse_json(const char *json, struct OpnumSymbol **out);

/**
 * Serialize a symbol back to JSON. Returns NULL on error; free the result
 * with `opnum_string_free`.
 *
 * # Safety
 * `symbol` must be a live handle from this library.
 */
char *opnum_symbol_to_json(const struct OpnumSymbol *symbol);

/**
 * Free a string returned by this library.
 *
 * # Safety
 * `text` must come from this library and not be freed twice.
 */
void opnum_string_free(char *text);

/**
 * Free a symbol handle.
 *
 * # Safety
 * `symbol` must come from this library and not be freed twice.
 */
void opnum_symbol_free(struct OpnumSymbol *symbol);

/**
 * Evaluate the symbol at `z = re + i im`, `|z| <= 1`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum OpnumStatus opnum_symbol_eval(const struct OpnumSymbol *symbol,
                                   double re,
                                   double im,
                                   double *out_re,
                                   double *out_im);

/**
 * Pseudo-hyperbolic distance between two points of the open disk.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum OpnumStatus opnum_pseudo_hyperbolic(double a_re,
                                         double a_im,
                                         double b_re,
                                         double b_im,
                                         double *out);

/**
 * Green capacity of the centered disk of radius `r` in the unit disk.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum OpnumStatus opnum_green_capacity_disk(double r, double *out);

/**
 * Monge-Ampere capacity parameters of a centered polydisk: `tau_m` and
 * `Gamma_m`.
 *
 * # Safety
 * `radii` must point to `len` doubles; out-pointers must be valid.
 */
enum OpnumStatus opnum_polydisk_capacity(const double *radii,
                                         uintptr_t len,
                                         double *out_tau,
                                         double *out_gamma);

/**
 * Norm of the bidisk reproducing kernel at `(a, b)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum OpnumStatus opnum_kernel_norm(double a_re, double a_im, double b_re, double b_im, double *out);

/**
 * Singular values of the truncated (weighted) composition operator.
 * `weight` may be NULL for the unweighted operator; `bergman_domain`
 * selects the Bergman-to-Hardy normalization.
 *
 * # Safety
 * Handles must be live; `out` must be a valid pointer.
 */
enum OpnumStatus opnum_spectrum_compute(const struct OpnumSymbol *phi,
                                        const struct OpnumSymbol *weight,
                                        uintptr_t truncation,
                                        uintptr_t n_keep,
                                        bool bergman_domain,
                                        struct OpnumSpectrum **out);

/**
 * Number of singular values held by the spectrum.
 *
 * # Safety
 * `spectrum` must be a live handle.
 */
uintptr_t opnum_spectrum_len(const struct OpnumSpectrum *spectrum);

/**
 * Copy the singular values into `buffer` (at most `len` of them); returns
 * the count written through `written`.
 *
 * # Safety
 * `buffer` must point to at least `len` doubles.
 */
enum OpnumStatus opnum_spectrum_values(const struct OpnumSpectrum *spectrum,
                                       double *buffer,
                                       uintptr_t len,
                                       uintptr_t *written);

/**
 * 1 if the indexed value is stabilized under truncation doubling, 0 if
 * not, -1 on an invalid handle or index.
 *
 * # Safety
 * `spectrum` must be a live handle.
 */
int32_t opnum_spectrum_is_stabilized(const struct OpnumSpectrum *spectrum, uintptr_t index);

/**
 * The recorded matrix perturbation budget of the spectrum.
 *
 * # Safety
 * `spectrum` must be a live handle; `out` valid.
 */
enum OpnumStatus opnum_spectrum_tail_budget(const struct OpnumSpectrum *spectrum, double *out);

/**
 * Free a spectrum handle.
 *
 * # Safety
 * `spectrum` must come from this library and not be freed twice.
 */
void opnum_spectrum_free(struct OpnumSpectrum *spectrum);

/**
 * Least-squares decay fit of the spectrum against the chosen family.
 *
 * # Safety
 * `spectrum` must be a live handle; out-pointers valid.
 */
enum OpnumStatus opnum_fit_decay(const struct OpnumSpectrum *spectrum,
                                 enum OpnumDecayFamily family,
                                 double *out_beta,
                                 double *out_amplitude,
                                 double *out_r2);

/**
 * Hilbert-Schmidt norm of the (weighted) composition operator by boundary
 * quadrature. `weight` may be NULL. Divergence comes back as
 * `OpnumStatus::Divergent`.
 *
 * # Safety
 * Handles must be live; `out` valid.
 */
enum OpnumStatus opnum_hs_norm(const struct OpnumSymbol *phi,
                               const struct OpnumSymbol *weight,
                               double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPNUM_LAB_H */
