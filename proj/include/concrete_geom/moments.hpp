#pragma once

#include <cstddef>

#include "concrete_geom/distributions.hpp"

namespace concrete {

// Closed-form log-ratio moments. Indices are 0-based; any index outside
// [0, K) throws IndexOutOfRange.

/// E[log(X_i / X_k)] = (1/tau) [-psi(alpha_i) + psi(alpha_k) + log(beta_i / beta_k)].
double lr_mean(const InverseSchlomilchParams& p, std::size_t i, std::size_t k);

/// Cov[log(X_i/X_k), log(X_j/X_l)]
///   = (1/tau^2) [(d_ij - d_il) psi'(alpha_i) - (d_kj - d_kl) psi'(alpha_k)].
double lr_cov(const InverseSchlomilchParams& p, std::size_t i, std::size_t k,
              std::size_t j, std::size_t l);

/// Var[log(X_i / X_k)] = (1/tau^2) (1 - d_ik) [psi'(alpha_i) + psi'(alpha_k)].
double lr_var(const InverseSchlomilchParams& p, std::size_t i, std::size_t k);

/// The Dirichlet vector 1 + e_m + e_n.
PositiveWeights special_alpha(std::size_t k, std::size_t m, std::size_t n);

/// Log-ratio mean E[log(X_i/X_k)] under IS(1 + e_m + e_n, beta, tau), from
/// the Kronecker-delta form with psi(alpha_i) = d_im + d_in - d_imn/2 - gamma.
double special_lr_mean(const PositiveWeights& beta, double tau, std::size_t m,
                       std::size_t n, std::size_t i, std::size_t k);

/// Raw moment E[log(X_i/X_k) log(X_i/X_l)] under IS(1 + e_m + e_n, beta, tau),
/// evaluated term by term from its Kronecker-delta expansion.
double raw_second_moment_special(const PositiveWeights& beta, double tau,
                                 std::size_t m, std::size_t n, std::size_t i,
                                 std::size_t k, std::size_t l);

}  // namespace concrete
