#ifndef CONCRETE_GEOM_H
#define CONCRETE_GEOM_H

#include <stddef.h>
#include <stdint.h>

#if defined(CG_BUILDING_LIBRARY)
#define CG_API __attribute__((visibility("default")))
#else
#define CG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Indices are 0-based. Matrices and sample batches are row-major. Every
 * function returning cg_status leaves its outputs untouched on failure and
 * records a message retrievable with cg_last_error_message on this thread. */

typedef enum cg_status {
  CG_OK = 0,
  CG_ERR_INVALID_ARGUMENT = 1,
  CG_ERR_NON_POSITIVE_ENTRY = 2,
  CG_ERR_DIM_MISMATCH = 3,
  CG_ERR_BOUNDARY_POINT = 4,
  CG_ERR_DOMAIN = 5,
  CG_ERR_NON_POSITIVE_TEMPERATURE = 6,
  CG_ERR_INDEX_OUT_OF_RANGE = 7,
  CG_ERR_UNSUPPORTED_DIM = 8,
  CG_ERR_NON_FINITE_INTEGRAND = 9,
  CG_ERR_NOT_NORMALIZED = 10,
  CG_ERR_DEGENERATE_WEIGHTS = 11,
  CG_ERR_INTERNAL = 12,
  CG_ERR_NULL_POINTER = 13,
  CG_ERR_OUT_OF_MEMORY = 14
} cg_status;

typedef struct cg_params cg_params;
typedef struct cg_rng cg_rng;

CG_API const char* cg_version(void);
CG_API const char* cg_status_string(cg_status status);
/* Message of the most recent failure on the calling thread, "" if none. */
CG_API const char* cg_last_error_message(void);

/* Concrete C(beta, tau); beta need not be normalized. */
CG_API cg_status cg_params_create(const double* beta, size_t k, double tau,
                                  cg_params** out);
/* Inverse Schlomilch IS(alpha, beta, tau). */
CG_API cg_status cg_params_create_is(const double* alpha, const double* beta,
                                     size_t k, double tau, cg_params** out);
CG_API void cg_params_destroy(cg_params* p);
CG_API size_t cg_params_dim(const cg_params* p);
CG_API int cg_params_has_alpha(const cg_params* p);

CG_API cg_status cg_rng_create(uint64_t seed, cg_rng** out);
CG_API void cg_rng_destroy(cg_rng* rng);

/* n draws of C(beta, tau) into out[n * K]. IS parameters are rejected. */
CG_API cg_status cg_sample(const cg_params* p, cg_rng* rng, size_t n, double* out);
/* Log-density at x; the IS density when the parameters carry alpha. */
CG_API cg_status cg_log_density(const cg_params* p, const double* x, size_t k,
                                double* out);
CG_API cg_status cg_log_norm_const(const cg_params* p, double* out);

CG_API cg_status cg_lr_mean(const cg_params* p, size_t i, size_t k, double* out);
CG_API cg_status cg_lr_cov(const cg_params* p, size_t i, size_t k, size_t j,
                           size_t l, double* out);
CG_API cg_status cg_lr_var(const cg_params* p, size_t i, size_t k, double* out);

/* full != 0: (K+1)x(K+1) matrix in (beta_1..beta_K, tau), beta as given.
 * full == 0: KxK matrix in (beta_1..beta_{K-1}, tau), canonical gauge. */
CG_API cg_status cg_fisher(const cg_params* p, int full, double* out);
CG_API cg_status cg_curvature_length(size_t k, double* out);
/* eta[K] receives (eta_1..eta_{K-1}, eta_K). */
CG_API cg_status cg_to_poincare(const cg_params* p, double* eta, double* ell);
/* Inverse map; beta_out[K] is normalized. */
CG_API cg_status cg_from_poincare(const double* eta, size_t k, double* beta_out,
                                  double* tau_out);
CG_API cg_status cg_fr_distance(const cg_params* a, const cg_params* b,
                                double* out);
CG_API cg_status cg_categorical_distance(const double* b, const double* b_prime,
                                         size_t k, double* out);

/* inverse == 0 maps C(beta, tau) to uniform; otherwise the reverse. */
CG_API cg_status cg_uniform_transform(const cg_params* p, const double* x,
                                      size_t k, int inverse, double* out);
CG_API cg_status cg_escort_transform(const cg_params* p, const double* x,
                                     size_t k, int sign, double* out);

/* probabilities[K] and the determinant route volume_ratios[K]. */
CG_API cg_status cg_rounding_probabilities(const double* beta, size_t k,
                                           double* probabilities,
                                           double* volume_ratios);
/* Argmax frequencies of n draws into frequencies[K]. */
CG_API cg_status cg_round_frequencies(const cg_params* p, cg_rng* rng, size_t n,
                                      double* frequencies);

typedef struct cg_verify_options {
  size_t k;
  uint64_t seed;
  unsigned jobs;
  size_t mc_samples;
  size_t pullback_points;
  double fd_step;
  int nodes_k2;
  int nodes_k3;
} cg_verify_options;

CG_API void cg_verify_options_default(cg_verify_options* options);
/* Runs the verification suite. *json_out must be released with
 * cg_string_free; *all_passed is 1 when every check passed. */
CG_API cg_status cg_verify(const cg_verify_options* options, char** json_out,
                           int* all_passed);
CG_API void cg_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
