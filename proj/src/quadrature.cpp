#include "concrete_geom/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "concrete_geom/error.hpp"
#include "concrete_geom/rng.hpp"

namespace concrete {

namespace {

constexpr double kFaceThreshold = 1e-300;

double log_factorial(std::size_t n) { return std::lgamma(double(n) + 1.0); }

// Point for an ALR node together with the Jacobian prod_i x_i, or nothing
// when the node sits numerically on a face.
std::optional<SimplexPoint> alr_node(std::span<const double> y,
                                     std::vector<double>& logits,
                                     double& jacobian) {
  std::copy(y.begin(), y.end(), logits.begin());
  logits.back() = 0.0;
  SimplexPoint x = softmax(logits);
  jacobian = 1.0;
  for (double xi : x.components()) {
    if (xi < kFaceThreshold) return std::nullopt;
    jacobian *= xi;
  }
  return x;
}

double checked(double v, const SimplexPoint& x) {
  if (!std::isfinite(v)) {
    std::string where;
    for (double xi : x.components()) where += " " + std::to_string(xi);
    fail(ErrorCode::NonFiniteIntegrand,
         "integrate_simplex: integrand is not finite at" + where);
  }
  return v;
}

}  // namespace

GaussLegendreRule gauss_legendre(int n, double a, double b) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "gauss_legendre: n must be >= 1");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

double integrate_interval(const std::function<double(double)>& f, double a,
                          double b, int n) {
  const GaussLegendreRule rule = gauss_legendre(n, a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    s += rule.weights[i] * f(rule.nodes[i]);
  }
  return s;
}

SimplexPoint sample_uniform_simplex(std::size_t k, RngState& rng) {
  std::vector<double> e(k);
  for (double& ei : e) ei = -std::log(rng.uniform_open());
  return closure(e);
}

McIntegral integrate_simplex_mc(const SimplexIntegrand& f, std::size_t k,
                                std::size_t samples, RngState& rng) {
  if (k < 2) fail(ErrorCode::DomainError, "integrate_simplex_mc: K < 2");
  if (samples < 2) {
    fail(ErrorCode::InvalidArgument, "integrate_simplex_mc: need >= 2 samples");
  }
  // Welford accumulation of f under the uniform law.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const SimplexPoint x = sample_uniform_simplex(k, rng);
    const double v = checked(f(x), x);
    const double d = v - mean;
    mean += d / double(s + 1);
    m2 += d * (v - mean);
  }
  const double volume = std::exp(-log_factorial(k - 1));
  const double var = m2 / double(samples - 1);
  return {mean * volume, volume * std::sqrt(var / double(samples))};
}

double integrate_simplex(const SimplexIntegrand& f, std::size_t k,
                         const QuadratureConfig& config) {
  using Mode = QuadratureConfig::Mode;
  if (k < 2) fail(ErrorCode::DomainError, "integrate_simplex: K < 2");
  const bool deterministic =
      config.mode == Mode::Deterministic || (config.mode == Mode::Auto && k <= 3);
  if (!deterministic) {
    RngState rng(config.mc_seed);
    return integrate_simplex_mc(f, k, config.mc_samples, rng).value;
  }
  if (k > 3) {
    fail(ErrorCode::UnsupportedDim,
         "integrate_simplex: deterministic mode supports K = 2, 3 only");
  }
  if (!(config.half_width > 0.0) || !std::isfinite(config.half_width)) {
    fail(ErrorCode::InvalidArgument, "integrate_simplex: bad box half-width");
  }

  const double w = config.half_width;
  const int n = k == 2 ? config.nodes_k2 : config.nodes_k3;
  const GaussLegendreRule rule = gauss_legendre(n, -w, w);

  std::vector<double> logits(k);
  double jac = 0.0;
  double total = 0.0;

  if (k == 2) {
    for (int i = 0; i < n; ++i) {
      const double y[1] = {rule.nodes[i]};
      const auto x = alr_node(y, logits, jac);
      if (!x) continue;
      total += rule.weights[i] * jac * checked(f(*x), *x);
    }
    return total;
  }

  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      const double y[2] = {rule.nodes[i], rule.nodes[j]};
      const auto x = alr_node(y, logits, jac);
      if (!x) continue;
      row += rule.weights[j] * jac * checked(f(*x), *x);
    }
    total += rule.weights[i] * row;
  }
  return total;
}

QuadratureConfig density_quadrature(const PositiveWeights& beta, double tau,
                                    QuadratureConfig base) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    fail(ErrorCode::NonPositiveTemperature,
         "density_quadrature: temperature must be positive and finite");
  }
  const std::vector<double> lb = beta.logs();
  const auto [lo, hi] = std::minmax_element(lb.begin(), lb.end());
  base.half_width = (40.0 + (*hi - *lo)) / tau;
  return base;
}

}  // namespace concrete
