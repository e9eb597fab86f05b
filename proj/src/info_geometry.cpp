#include "concrete_geom/info_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "concrete_geom/error.hpp"

namespace concrete {

namespace {

using Eigen::Index;

constexpr double kPiSq6 = std::numbers::pi * std::numbers::pi / 6.0;

double pairwise_square_sum(std::span<const double> v) {
  double s = 0.0;
  for (double vi : v) {
    for (double vj : v) s += (vi - vj) * (vi - vj);
  }
  return s;
}

}  // namespace

double curvature_length(std::size_t k) {
  if (k < 2) {
    fail(ErrorCode::DomainError, "curvature_length: K must be at least 2");
  }
  const double kk = double(k);
  return std::sqrt((kk - 1.0) * (kk * kPiSq6 + 1.0) / (kk + 1.0));
}

FisherFull fisher_full(const ConcreteParams& p) {
  const std::size_t k = p.dim();
  const double kk = double(k);
  const double tau = p.tau();
  const std::vector<double> lb = p.beta().logs();
  double sum_lb = 0.0;
  for (double v : lb) sum_lb += v;

  Eigen::MatrixXd m(Index(k + 1), Index(k + 1));
  const Index t = Index(k);
  m(t, t) = ((kk - 1.0) * (kk * kPiSq6 + 1.0) + 0.5 * pairwise_square_sum(lb)) /
            ((kk + 1.0) * tau * tau);
  for (std::size_t i = 0; i < k; ++i) {
    const double bi = p.beta()[i];
    const double it = (sum_lb - kk * lb[i]) / ((kk + 1.0) * tau * bi);
    m(Index(i), t) = it;
    m(t, Index(i)) = it;
    for (std::size_t j = 0; j < k; ++j) {
      const double delta = i == j ? 1.0 : 0.0;
      m(Index(i), Index(j)) = (kk * delta - 1.0) / ((kk + 1.0) * bi * p.beta()[j]);
    }
  }
  return FisherFull(std::move(m));
}

FisherReduced fisher_reduced(const ConcreteParams& p) {
  const ConcreteParams c = p.canonical();
  const std::size_t k = c.dim();
  const double kk = double(k);
  const double tau = c.tau();
  const auto& b = c.beta();
  const std::vector<double> lb = b.logs();
  double sum_lb = 0.0;
  for (double v : lb) sum_lb += v;
  const double bk = b[k - 1];

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(Index(k), Index(k));
  const Index t = Index(k - 1);
  m(t, t) = ((kk - 1.0) * (kk * kPiSq6 + 1.0) + 0.5 * pairwise_square_sum(lb)) /
            ((kk + 1.0) * tau * tau);
  const double last = (sum_lb - kk * lb[k - 1]) / bk;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const double it =
        ((sum_lb - kk * lb[i]) / b[i] - last) / ((kk + 1.0) * tau);
    m(Index(i), t) = it;
    m(t, Index(i)) = it;
    for (std::size_t j = 0; j + 1 < k; ++j) {
      const double delta = i == j ? 1.0 : 0.0;
      m(Index(i), Index(j)) =
          ((kk * delta - 1.0) / (b[i] * b[j]) + 1.0 / (b[i] * bk) +
           1.0 / (b[j] * bk) + (kk - 1.0) / (bk * bk)) /
          (kk + 1.0);
    }
  }
  return FisherReduced(std::move(m));
}

Eigen::MatrixXd reduce_fisher(const Eigen::MatrixXd& full) {
  const Index n = full.rows();
  if (n < 3 || full.cols() != n) {
    fail(ErrorCode::DimMismatch, "reduce_fisher: expected a square (K+1) matrix");
  }
  const Index k = n - 1;
  // Columns: d(beta_1..beta_K, tau) / d(beta_1..beta_{K-1}, tau).
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, k);
  for (Index a = 0; a + 1 < k; ++a) {
    c(a, a) = 1.0;
    c(k - 1, a) = -1.0;
  }
  c(k, k - 1) = 1.0;
  return c.transpose() * full * c;
}

PoincarePoint::PoincarePoint(std::vector<double> eta_, double eta_k_, double ell_)
    : eta(std::move(eta_)), eta_k(eta_k_), ell(ell_) {
  if (eta.empty()) {
    fail(ErrorCode::DomainError, "PoincarePoint: needs K - 1 >= 1 coordinates");
  }
  if (!std::isfinite(eta_k) || eta_k <= 0.0) {
    fail(ErrorCode::DomainError, "PoincarePoint: eta_K must be positive");
  }
  for (double e : eta) {
    if (!std::isfinite(e)) {
      fail(ErrorCode::DomainError, "PoincarePoint: coordinates must be finite");
    }
  }
  const double expected = curvature_length(eta.size() + 1);
  if (std::abs(ell - expected) > 1e-12 * expected) {
    fail(ErrorCode::DomainError,
         "PoincarePoint: ell does not match the curvature length for K = " +
             std::to_string(eta.size() + 1));
  }
}

PoincarePoint to_poincare(const ConcreteParams& p) {
  const std::size_t k = p.dim();
  const double ell = curvature_length(k);
  const double sk = std::sqrt(double(k));
  const double sk1 = std::sqrt(double(k) + 1.0);
  const std::vector<double> lb = p.beta().logs();

  std::vector<double> xi(k - 1);
  double xi_sum = 0.0;
  for (std::size_t a = 0; a + 1 < k; ++a) {
    xi[a] = (lb[a] - lb[k - 1]) / (ell * p.tau());
    xi_sum += xi[a];
  }
  std::vector<double> eta(k - 1);
  for (std::size_t a = 0; a + 1 < k; ++a) {
    eta[a] = sk * xi[a] / sk1 - xi_sum / (sk1 * (sk + 1.0));
  }
  return PoincarePoint(std::move(eta), 1.0 / p.tau(), ell);
}

ConcreteParams from_poincare(const PoincarePoint& q) {
  const std::size_t k = q.categories();
  const double sk = std::sqrt(double(k));
  const double sk1 = std::sqrt(double(k) + 1.0);
  const double tau = 1.0 / q.eta_k;

  double eta_sum = 0.0;
  for (double e : q.eta) eta_sum += e;
  std::vector<double> log_ratio(k, 0.0);
  for (std::size_t a = 0; a + 1 < k; ++a) {
    const double xi = sk1 * q.eta[a] / sk + sk1 * eta_sum / (sk * (sk + 1.0));
    log_ratio[a] = q.ell * tau * xi;
  }
  const SimplexPoint beta = softmax(log_ratio);
  return ConcreteParams(
      PositiveWeights({beta.components().begin(), beta.components().end()}), tau);
}

double poincare_squared_separation(const PoincarePoint& a, const PoincarePoint& b) {
  if (a.eta.size() != b.eta.size()) {
    fail(ErrorCode::DimMismatch, "poincare_squared_separation: dimension mismatch");
  }
  double s = (a.eta_k - b.eta_k) * (a.eta_k - b.eta_k);
  for (std::size_t i = 0; i < a.eta.size(); ++i) {
    s += (a.eta[i] - b.eta[i]) * (a.eta[i] - b.eta[i]);
  }
  return s;
}

double unit_half_space_distance(const PoincarePoint& a, const PoincarePoint& b) {
  const double sep = std::sqrt(poincare_squared_separation(a, b));
  return 2.0 * std::asinh(sep / (2.0 * std::sqrt(a.eta_k * b.eta_k)));
}

DistanceResult fr_distance(const ConcreteParams& p, const ConcreteParams& q) {
  if (p.dim() != q.dim()) {
    fail(ErrorCode::DimMismatch, "fr_distance: dimension mismatch");
  }
  const std::size_t k = p.dim();
  const double ell = curvature_length(k);
  const double r = std::sqrt(q.tau() / p.tau());
  const double s = std::sqrt(p.tau() / q.tau());

  const auto deltas = [&](const PositiveWeights& b, const PositiveWeights& bp) {
    std::vector<double> out(k);
    for (std::size_t i = 0; i < k; ++i) {
      out[i] = r * std::log(b[i]) - s * std::log(bp[i]);
    }
    return out;
  };
  DistanceResult result;
  result.delta = deltas(p.beta().normalized(), q.beta().normalized());
  const double spread = pairwise_square_sum(result.delta);

  // The pairwise sum does not depend on the gauge of either argument.
  const double raw_spread = pairwise_square_sum(deltas(p.beta(), q.beta()));
  if (std::abs(raw_spread - spread) > 1e-9 * (1.0 + spread)) {
    fail(ErrorCode::Internal, "fr_distance: gauge dependence in the delta sum");
  }

  const double radial = (r - s) * (r - s);
  const double arg =
      0.5 * std::sqrt(radial + spread / (2.0 * (double(k) + 1.0) * ell * ell));
  result.value = 2.0 * ell * std::asinh(arg);
  return result;
}

double fr_distance_equal_temperature(const PositiveWeights& beta,
                                     const PositiveWeights& beta_prime) {
  if (beta.dim() != beta_prime.dim()) {
    fail(ErrorCode::DimMismatch, "fr_distance_equal_temperature: dimension mismatch");
  }
  const std::size_t k = beta.dim();
  const double ell = curvature_length(k);
  std::vector<double> log_ratio(k);
  for (std::size_t i = 0; i < k; ++i) {
    log_ratio[i] = std::log(beta[i] / beta_prime[i]);
  }
  const double inner = pairwise_square_sum(log_ratio) / (2.0 * (double(k) + 1.0));
  return 2.0 * ell * std::asinh(std::sqrt(inner) / (2.0 * ell));
}

double categorical_fr_distance(std::span<const double> b,
                               std::span<const double> b_prime) {
  if (b.size() != b_prime.size()) {
    fail(ErrorCode::DimMismatch, "categorical_fr_distance: dimension mismatch");
  }
  const auto check = [](std::span<const double> v) {
    double s = 0.0;
    for (double vi : v) {
      if (!std::isfinite(vi) || vi < 0.0) {
        fail(ErrorCode::NotNormalized,
             "categorical_fr_distance: entries must be non-negative");
      }
      s += vi;
    }
    if (std::abs(s - 1.0) > 1e-9) {
      fail(ErrorCode::NotNormalized,
           "categorical_fr_distance: probabilities must sum to 1");
    }
  };
  check(b);
  check(b_prime);
  double overlap = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) overlap += std::sqrt(b[i] * b_prime[i]);
  return 2.0 * std::acos(std::clamp(overlap, -1.0, 1.0));
}

}  // namespace concrete
