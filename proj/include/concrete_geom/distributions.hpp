#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "concrete_geom/rng.hpp"
#include "concrete_geom/simplex.hpp"

namespace concrete {

/// Concrete (Gumbel-softmax) law C(beta, tau) on S_K.
///
/// beta is kept unnormalized: the family is invariant under beta -> c beta.
/// Throws NonPositiveTemperature unless 0 < tau < inf.
class ConcreteParams {
 public:
  ConcreteParams(PositiveWeights beta, double tau);

  const PositiveWeights& beta() const noexcept { return beta_; }
  double tau() const noexcept { return tau_; }
  std::size_t dim() const noexcept { return beta_.dim(); }

  /// Same law with beta rescaled to sum to one.
  ConcreteParams canonical() const;

 private:
  PositiveWeights beta_;
  double tau_;
};

/// Inverse Schlomilch law IS(alpha, beta, tau); alpha = 1 gives C(beta, tau).
class InverseSchlomilchParams {
 public:
  InverseSchlomilchParams(PositiveWeights alpha, PositiveWeights beta,
                          double tau);

  /// alpha = (1, ..., 1).
  static InverseSchlomilchParams concrete(const ConcreteParams& p);

  const PositiveWeights& alpha() const noexcept { return alpha_; }
  const PositiveWeights& beta() const noexcept { return beta_; }
  double tau() const noexcept { return tau_; }
  std::size_t dim() const noexcept { return beta_.dim(); }
  double alpha_plus() const noexcept { return alpha_plus_; }

  /// The Concrete law sharing beta and tau.
  ConcreteParams base() const { return ConcreteParams(beta_, tau_); }

 private:
  PositiveWeights alpha_;
  PositiveWeights beta_;
  double tau_;
  double alpha_plus_;
};

/// Points with any component below this are treated as on the boundary.
inline constexpr double kBoundaryThreshold = 1e-300;

/// log k(x) = log sum_j beta_j / x_j^tau, by log-sum-exp.
double log_k(const PositiveWeights& beta, double tau, const SimplexPoint& x);

/// log h(x) = -K log k(x) - (tau + 1) sum_i log x_i.
double log_h(const ConcreteParams& p, const SimplexPoint& x);

/// log g(x) = -alpha_+ log k(x) - sum_i (tau alpha_i + 1) log x_i.
double log_g(const InverseSchlomilchParams& p, const SimplexPoint& x);

/// Log density of C(beta, tau). Throws DimMismatch and BoundaryPoint.
double concrete_log_density(const ConcreteParams& p, const SimplexPoint& x);

/// Log density of IS(alpha, beta, tau). Throws DimMismatch and BoundaryPoint.
double is_log_density(const InverseSchlomilchParams& p, const SimplexPoint& x);

/// log J(alpha) = -(K-1) log tau - log Gamma(alpha_+)
///                + sum_i [log Gamma(alpha_i) - alpha_i log beta_i].
double log_norm_const(const InverseSchlomilchParams& p);

/// log J_0 = -log (K-1)! - (K-1) log tau - sum_i log beta_i.
double log_norm_const(const ConcreteParams& p);

/// Gradient of log J(alpha) in alpha, which is the mean of the sufficient
/// statistic: psi(alpha_i) - psi(alpha_+) - log beta_i.
std::vector<double> log_norm_const_gradient(const InverseSchlomilchParams& p);

/// Standard Gumbel quantile -log(-log u) for u in (0, 1).
double gumbel_from_uniform(double u);

double sample_standard_gumbel(RngState& rng);

/// softmax((w + log beta) / tau) for given Gumbel values w.
SimplexPoint concrete_from_gumbel(const ConcreteParams& p,
                                  std::span<const double> gumbels);

/// n independent draws of C(beta, tau).
std::vector<SimplexPoint> sample_concrete(const ConcreteParams& p,
                                          RngState& rng, std::size_t n);

enum class TransformDirection { ToUniform, FromUniform };

/// ToUniform: y_i ∝ beta_i / x_i^tau. FromUniform: x_i ∝ (beta_i / y_i)^(1/tau).
/// The two are mutually inverse; ToUniform maps C(beta, tau) to the uniform
/// law on S_K.
SimplexPoint uniform_transform(const ConcreteParams& p, const SimplexPoint& x,
                               TransformDirection direction);

/// Escort map y_i ∝ beta_i x_i^(sign tau), sign = +1 or -1.
SimplexPoint escort_transform(const ConcreteParams& p, const SimplexPoint& x,
                              int sign);

struct RoundingProbabilities {
  /// p_i = beta_i / sum_j beta_j.
  std::vector<double> probabilities;
  /// det M_i, the volume ratio of the sub-simplex at vertex i.
  std::vector<double> volume_ratios;
};

/// Probability that component i is the largest; independent of tau.
/// Both routes are computed and must agree within 1e-12 (Internal otherwise).
RoundingProbabilities rounding_probabilities(const PositiveWeights& beta);

/// Index of the largest component (0-based), lowest index on ties.
std::size_t round_to_vertex(const SimplexPoint& x);

/// T_i(x) = -tau log x_i - log k(x).
std::vector<double> sufficient_statistic(const ConcreteParams& p,
                                         const SimplexPoint& x);

}  // namespace concrete
