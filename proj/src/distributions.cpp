#include "concrete_geom/distributions.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "concrete_geom/error.hpp"
#include "concrete_geom/special_functions.hpp"

namespace concrete {

namespace {

void require_temperature(double tau) {
  if (!std::isfinite(tau) || tau <= 0.0) {
    fail(ErrorCode::NonPositiveTemperature,
         "temperature must be positive and finite, got " + std::to_string(tau));
  }
}

void require_interior(std::size_t k, const SimplexPoint& x, const char* what) {
  if (x.dim() != k) {
    fail(ErrorCode::DimMismatch, std::string(what) + ": point has dimension " +
                                     std::to_string(x.dim()) + ", expected " +
                                     std::to_string(k));
  }
  for (double xi : x.components()) {
    if (xi < kBoundaryThreshold) {
      fail(ErrorCode::BoundaryPoint,
           std::string(what) + ": point lies on the simplex boundary");
    }
  }
}

// Summing in sorted order makes the result independent of how the
// components are indexed.
double sorted_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

double sorted_log_sum_exp(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  const double m = terms.back();
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

}  // namespace

ConcreteParams::ConcreteParams(PositiveWeights beta, double tau)
    : beta_(std::move(beta)), tau_(tau) {
  require_temperature(tau_);
}

ConcreteParams ConcreteParams::canonical() const {
  return ConcreteParams(beta_.normalized(), tau_);
}

InverseSchlomilchParams::InverseSchlomilchParams(PositiveWeights alpha,
                                                 PositiveWeights beta,
                                                 double tau)
    : alpha_(std::move(alpha)), beta_(std::move(beta)), tau_(tau) {
  require_temperature(tau_);
  if (alpha_.dim() != beta_.dim()) {
    fail(ErrorCode::DimMismatch, "InverseSchlomilchParams: alpha and beta "
                                 "must have the same dimension");
  }
  alpha_plus_ = alpha_.sum();
  if (!std::isfinite(alpha_plus_)) {
    fail(ErrorCode::DomainError, "InverseSchlomilchParams: alpha_+ overflows");
  }
}

InverseSchlomilchParams InverseSchlomilchParams::concrete(
    const ConcreteParams& p) {
  return InverseSchlomilchParams(PositiveWeights::ones(p.dim()), p.beta(),
                                 p.tau());
}

double log_k(const PositiveWeights& beta, double tau, const SimplexPoint& x) {
  require_interior(beta.dim(), x, "log_k");
  std::vector<double> terms(x.dim());
  for (std::size_t j = 0; j < x.dim(); ++j) {
    terms[j] = std::log(beta[j]) - tau * std::log(x[j]);
  }
  return sorted_log_sum_exp(std::move(terms));
}

double log_h(const ConcreteParams& p, const SimplexPoint& x) {
  const double lk = log_k(p.beta(), p.tau(), x);
  std::vector<double> terms(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    terms[i] = -(p.tau() + 1.0) * std::log(x[i]);
  }
  return -double(p.dim()) * lk + sorted_sum(std::move(terms));
}

double log_g(const InverseSchlomilchParams& p, const SimplexPoint& x) {
  const double lk = log_k(p.beta(), p.tau(), x);
  std::vector<double> terms(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    terms[i] = -(p.tau() * p.alpha()[i] + 1.0) * std::log(x[i]);
  }
  return -p.alpha_plus() * lk + sorted_sum(std::move(terms));
}

double concrete_log_density(const ConcreteParams& p, const SimplexPoint& x) {
  require_interior(p.dim(), x, "concrete_log_density");
  const std::size_t k = p.dim();
  const double tau = p.tau();
  std::vector<double> terms(k);
  std::vector<double> k_terms(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double lb = std::log(p.beta()[i]);
    const double lx = std::log(x[i]);
    terms[i] = lb - (tau + 1.0) * lx;
    k_terms[i] = lb - tau * lx;
  }
  return special::log_gamma(double(k)) + double(k - 1) * std::log(tau) +
         sorted_sum(std::move(terms)) -
         double(k) * sorted_log_sum_exp(std::move(k_terms));
}

double is_log_density(const InverseSchlomilchParams& p, const SimplexPoint& x) {
  require_interior(p.dim(), x, "is_log_density");
  return log_g(p, x) - log_norm_const(p);
}

double log_norm_const(const InverseSchlomilchParams& p) {
  const std::size_t k = p.dim();
  std::vector<double> terms(k);
  for (std::size_t i = 0; i < k; ++i) {
    terms[i] = special::log_gamma(p.alpha()[i]) -
               p.alpha()[i] * std::log(p.beta()[i]);
  }
  return -double(k - 1) * std::log(p.tau()) -
         special::log_gamma(p.alpha_plus()) + sorted_sum(std::move(terms));
}

double log_norm_const(const ConcreteParams& p) {
  const std::size_t k = p.dim();
  return -special::log_gamma(double(k)) - double(k - 1) * std::log(p.tau()) -
         sorted_sum(p.beta().logs());
}

std::vector<double> log_norm_const_gradient(const InverseSchlomilchParams& p) {
  const double psi_plus = special::digamma(p.alpha_plus());
  std::vector<double> g(p.dim());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = special::digamma(p.alpha()[i]) - psi_plus - std::log(p.beta()[i]);
  }
  return g;
}

double gumbel_from_uniform(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    fail(ErrorCode::DomainError, "gumbel_from_uniform: u must lie in (0, 1)");
  }
  return -std::log(-std::log(u));
}

double sample_standard_gumbel(RngState& rng) {
  return gumbel_from_uniform(rng.uniform_open());
}

SimplexPoint concrete_from_gumbel(const ConcreteParams& p,
                                  std::span<const double> gumbels) {
  if (gumbels.size() != p.dim()) {
    fail(ErrorCode::DimMismatch, "concrete_from_gumbel: need one Gumbel value "
                                 "per component");
  }
  std::vector<double> logits(p.dim());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    logits[i] = (gumbels[i] + std::log(p.beta()[i])) / p.tau();
  }
  return softmax(logits);
}

std::vector<SimplexPoint> sample_concrete(const ConcreteParams& p,
                                          RngState& rng, std::size_t n) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "sample_concrete: n must be >= 1");
  std::vector<SimplexPoint> out;
  out.reserve(n);
  std::vector<double> w(p.dim());
  for (std::size_t s = 0; s < n; ++s) {
    for (double& wi : w) wi = sample_standard_gumbel(rng);
    out.push_back(concrete_from_gumbel(p, w));
  }
  return out;
}

SimplexPoint uniform_transform(const ConcreteParams& p, const SimplexPoint& x,
                               TransformDirection direction) {
  require_interior(p.dim(), x, "uniform_transform");
  std::vector<double> logits(p.dim());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double lb = std::log(p.beta()[i]);
    const double lx = std::log(x[i]);
    logits[i] = direction == TransformDirection::ToUniform
                    ? lb - p.tau() * lx
                    : (lb - lx) / p.tau();
  }
  return softmax(logits);
}

SimplexPoint escort_transform(const ConcreteParams& p, const SimplexPoint& x,
                              int sign) {
  if (sign != 1 && sign != -1) {
    fail(ErrorCode::InvalidArgument, "escort_transform: sign must be +1 or -1");
  }
  require_interior(p.dim(), x, "escort_transform");
  std::vector<double> logits(p.dim());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    logits[i] = std::log(p.beta()[i]) + sign * p.tau() * std::log(x[i]);
  }
  return softmax(logits);
}

RoundingProbabilities rounding_probabilities(const PositiveWeights& beta) {
  const std::size_t k = beta.dim();
  const double total = beta.sum();
  RoundingProbabilities out;
  out.probabilities.resize(k);
  out.volume_ratios.resize(k);

  Eigen::VectorXd centre(k);
  for (std::size_t j = 0; j < k; ++j) {
    out.probabilities[j] = beta[j] / total;
    centre[Eigen::Index(j)] = out.probabilities[j];
  }
  // M_i maps the vertices e_1..e_K onto the sub-simplex with e_i replaced by
  // the closure of beta.
  for (std::size_t i = 0; i < k; ++i) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(Eigen::Index(k), Eigen::Index(k));
    m.col(Eigen::Index(i)) = centre;
    out.volume_ratios[i] = m.partialPivLu().determinant();
    if (std::abs(out.volume_ratios[i] - out.probabilities[i]) > 1e-12) {
      fail(ErrorCode::Internal,
           "rounding_probabilities: determinant and closed form disagree");
    }
  }
  return out;
}

std::size_t round_to_vertex(const SimplexPoint& x) {
  const auto c = x.components();
  return std::size_t(std::max_element(c.begin(), c.end()) - c.begin());
}

std::vector<double> sufficient_statistic(const ConcreteParams& p,
                                         const SimplexPoint& x) {
  const double lk = log_k(p.beta(), p.tau(), x);
  std::vector<double> t(p.dim());
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = -p.tau() * std::log(x[i]) - lk;
  }
  return t;
}

}  // namespace concrete
