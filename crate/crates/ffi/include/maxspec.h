#ifndef MAXSPEC_H
#define MAXSPEC_H

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

typedef enum MaxspecStatus {
  MAXSPEC_STATUS_OK = 0,
  MAXSPEC_STATUS_NULL_POINTER = 1,
  MAXSPEC_STATUS_PARAMETER = 2,
  MAXSPEC_STATUS_INPUT = 3,
  MAXSPEC_STATUS_PARSE = 4,
  MAXSPEC_STATUS_SCALE = 5,
  MAXSPEC_STATUS_RANGE = 6,
  MAXSPEC_STATUS_VALIDITY = 7,
  MAXSPEC_STATUS_DEGENERATE_DATA = 8,
  MAXSPEC_STATUS_NUMERIC = 9,
  MAXSPEC_STATUS_UNSUPPORTED_MODEL = 10,
  MAXSPEC_STATUS_INFINITE_MOMENT = 11,
  MAXSPEC_STATUS_NON_POSITIVE_SLOPE = 12,
  MAXSPEC_STATUS_INSUFFICIENT_SCALES = 13,
  MAXSPEC_STATUS_DOMAIN = 14,
  MAXSPEC_STATUS_IO = 15,
  MAXSPEC_STATUS_BUFFER_TOO_SMALL = 16,
  MAXSPEC_STATUS_PANIC = 17,
} MaxspecStatus;

// Opaque ψ table.
typedef struct MaxspecPsiTable MaxspecPsiTable;

// Opaque max-spectrum.
typedef struct MaxspecSpectrum MaxspecSpectrum;

// GLS fit summary. `alpha` and `sigma0` are NaN when `h <= 0`.
typedef struct MaxspecFit {
  size_t j1;
  size_t j2;
  double h;
  double c;
  double cw;
  double se_h;
  size_t n_top;
  double alpha;
  double sigma0;
} MaxspecFit;

// Confidence interval for H and its inversion for α. When `alpha_defined`
// is false the whole H interval is non-positive; when `alpha_unbounded` is
// true `alpha_high` is +infinity.
typedef struct MaxspecInterval {
  double level;
  double h_hat;
  double h_low;
  double h_high;
  bool alpha_defined;
  bool alpha_unbounded;
  double alpha_low;
  double alpha_high;
  // Bootstrap replicates dropped for undefined spectra (0 for asymptotic).
  size_t dropped;
} MaxspecInterval;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer stays
// valid until the next failing call on the same thread.
const char *maxspec_last_error(void);

// Library version as a static NUL-terminated string.
const char *maxspec_version(void);

// # Safety
// `data` must point to `n` doubles; `out` must be writable.
enum MaxspecStatus maxspec_spectrum_compute(const double *data,
                                            size_t n,
                                            struct MaxspecSpectrum **out);

// # Safety
// `spec` must come from `maxspec_spectrum_compute` and not be used afterwards.
void maxspec_spectrum_free(struct MaxspecSpectrum *spec);

// Largest scale `jMax`, or 0 for NULL.
//
// # Safety
// `spec` must be NULL or a live handle.
size_t maxspec_spectrum_j_max(const struct MaxspecSpectrum *spec);

// Smallest scale with a defined `Y_j`, or 0 for NULL.
//
// # Safety
// `spec` must be NULL or a live handle.
size_t maxspec_spectrum_j_min_valid(const struct MaxspecSpectrum *spec);

// `Y_j` and the block count `N_j` at scale `j`.
//
// # Safety
// `spec` must be a live handle; `y` and `nj` must be writable (either may be NULL).
enum MaxspecStatus maxspec_spectrum_scale(const struct MaxspecSpectrum *spec,
                                          size_t j,
                                          double *y,
                                          size_t *nj);

// The builtin ψ table.
struct MaxspecPsiTable *maxspec_psi_builtin(void);

// A ψ table from `values[0..len]` (lags 0, 1, …), validated.
//
// # Safety
// `values` must point to `len` doubles; `out` must be writable.
enum MaxspecStatus maxspec_psi_from_values(const double *values,
                                           size_t len,
                                           struct MaxspecPsiTable **out);

// # Safety
// `psi` must come from this library and not be used afterwards.
void maxspec_psi_free(struct MaxspecPsiTable *psi);

// GLS fit on scales `j1..=j2`.
//
// # Safety
// `spec` must be a live handle, `psi` NULL or live, `out` writable.
enum MaxspecStatus maxspec_gls_fit(const struct MaxspecSpectrum *spec,
                                   size_t j1,
                                   size_t j2,
                                   const struct MaxspecPsiTable *psi,
                                   struct MaxspecFit *out);

// Automatic `j1` selection up to `jMax`; `out` receives the final fit.
//
// # Safety
// `spec` must be a live handle, `psi` NULL or live, `out` writable.
enum MaxspecStatus maxspec_select_j1(const struct MaxspecSpectrum *spec,
                                     double p,
                                     size_t b,
                                     const struct MaxspecPsiTable *psi,
                                     struct MaxspecFit *out);

// Asymptotic interval from a fit produced by this library.
//
// # Safety
// `fit` must be readable and `out` writable.
enum MaxspecStatus maxspec_asymptotic_ci(const struct MaxspecFit *fit,
                                         double level,
                                         struct MaxspecInterval *out);

// Permutation-bootstrap interval on scales `j1..=j2` with `replicates`
// permutations drawn from stream `(seed, stream)`.
//
// # Safety
// `data` must point to `n` doubles, `psi` NULL or live, `out` writable.
enum MaxspecStatus maxspec_bootstrap(const double *data,
                                     size_t n,
                                     size_t j1,
                                     size_t j2,
                                     size_t replicates,
                                     double level,
                                     uint64_t seed,
                                     uint64_t stream,
                                     const struct MaxspecPsiTable *psi,
                                     struct MaxspecInterval *out);

// Hill estimate from the top `k` order statistics.
//
// # Safety
// `data` must point to `n` doubles; `out` writable.
enum MaxspecStatus maxspec_hill_estimate(const double *data, size_t n, size_t k, double *out);

// Hill plot: `alpha[k-1]` receives the estimate at `k = 1, 2, …`. `len`
// receives the number of points; when it exceeds `capacity` nothing is
// written and the status is `BUFFER_TOO_SMALL`.
//
// # Safety
// `data` must point to `n` doubles, `alpha` to `capacity` writable doubles,
// `len` writable.
enum MaxspecStatus maxspec_hill_plot(const double *data,
                                     size_t n,
                                     double *alpha,
                                     size_t capacity,
                                     size_t *len);

// Draws `n` values from the model described by `dist`
// (`name:key=value,…`, e.g. `"frechet:alpha=1.5"`) into `out`.
//
// # Safety
// `dist` must be a NUL-terminated string and `out` must hold `n` doubles.
enum MaxspecStatus maxspec_sample(const char *dist,
                                  size_t n,
                                  uint64_t seed,
                                  uint64_t stream,
                                  double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAXSPEC_H */
