#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "concrete_geom/distributions.hpp"

namespace concrete {

/// Curvature length ell = sqrt((K-1)(K pi^2/6 + 1)/(K+1)); the information
/// metric of the K-category Concrete family is hyperbolic with sectional
/// curvature -1/ell^2. Throws DomainError for K < 2.
double curvature_length(std::size_t k);

/// Degenerate (K+1)x(K+1) Fisher matrix over (beta_1..beta_K, tau).
/// (beta, 0) spans its null space.
class FisherFull {
 public:
  explicit FisherFull(Eigen::MatrixXd m) : m_(std::move(m)) {}
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return std::size_t(m_.rows()); }
  double operator()(std::size_t a, std::size_t b) const {
    return m_(Eigen::Index(a), Eigen::Index(b));
  }

 private:
  Eigen::MatrixXd m_;
};

/// Non-degenerate KxK Fisher matrix over (beta_1..beta_{K-1}, tau) with the
/// fill-up beta_K = 1 - sum_a beta_a.
class FisherReduced {
 public:
  explicit FisherReduced(Eigen::MatrixXd m) : m_(std::move(m)) {}
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return std::size_t(m_.rows()); }
  double operator()(std::size_t a, std::size_t b) const {
    return m_(Eigen::Index(a), Eigen::Index(b));
  }

 private:
  Eigen::MatrixXd m_;
};

FisherFull fisher_full(const ConcreteParams& p);

/// Closed-form reduced matrix. beta is brought to the canonical gauge first.
FisherReduced fisher_reduced(const ConcreteParams& p);

/// Pushes a full matrix through d beta_K = -sum_a d beta_a.
Eigen::MatrixXd reduce_fisher(const Eigen::MatrixXd& full);

/// Point of the Poincare half-space: (eta_1..eta_{K-1}) and eta_K = 1/tau.
struct PoincarePoint {
  PoincarePoint(std::vector<double> eta, double eta_k, double ell);

  std::vector<double> eta;
  double eta_k;
  double ell;

  std::size_t categories() const noexcept { return eta.size() + 1; }
};

PoincarePoint to_poincare(const ConcreteParams& p);

/// Inverse of to_poincare; returns beta in the canonical gauge.
ConcreteParams from_poincare(const PoincarePoint& q);

/// Squared Euclidean distance between half-space coordinates.
double poincare_squared_separation(const PoincarePoint& a, const PoincarePoint& b);

/// Geodesic distance on the unit half-space model:
/// 2 asinh(|eta - eta'| / (2 sqrt(eta_K eta_K'))).
double unit_half_space_distance(const PoincarePoint& a, const PoincarePoint& b);

struct DistanceResult {
  double value;
  std::vector<double> delta;
};

/// Fisher-Rao geodesic distance between C(beta, tau) and C(beta', tau').
DistanceResult fr_distance(const ConcreteParams& p, const ConcreteParams& q);

/// Equal-temperature form of the distance; independent of tau.
double fr_distance_equal_temperature(const PositiveWeights& beta,
                                     const PositiveWeights& beta_prime);

/// 2 arccos(sum_i sqrt(b_i b'_i)) between categorical laws. Entries must be
/// non-negative and each vector must sum to 1 within 1e-9 (NotNormalized).
double categorical_fr_distance(std::span<const double> b,
                               std::span<const double> b_prime);

}  // namespace concrete
