#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "concrete_geom/simplex.hpp"

namespace concrete {

class RngState;

struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped onto [a, b].
GaussLegendreRule gauss_legendre(int n, double a, double b);

/// 1-D Gauss-Legendre quadrature of f over [a, b].
double integrate_interval(const std::function<double(double)>& f, double a,
                          double b, int n);

struct QuadratureConfig {
  enum class Mode { Auto, Deterministic, MonteCarlo };

  Mode mode = Mode::Auto;
  int nodes_k2 = 256;  // per axis
  int nodes_k3 = 128;  // per axis
  /// Half-width of the truncated ALR box [-w, w]^{K-1}.
  double half_width = 40.0;
  std::size_t mc_samples = 1'000'000;
  std::uint64_t mc_seed = 0;
};

using SimplexIntegrand = std::function<double(const SimplexPoint&)>;

/// Approximates the integral of f over S_K with respect to d^{K-1}x.
///
/// Deterministic mode (K = 2, 3) uses tensorized Gauss-Legendre nodes in ALR
/// coordinates over the configured box, with Jacobian prod_i x_i. Nodes whose
/// preimage lies within 1e-300 of a face carry weight below 1e-300 and are
/// skipped. Auto mode falls back to Monte Carlo for K > 3, drawing uniform
/// points of the simplex. Throws UnsupportedDim for Deterministic with K > 3
/// and NonFiniteIntegrand if f is not finite at an evaluated point.
double integrate_simplex(const SimplexIntegrand& f, std::size_t k,
                         const QuadratureConfig& config = {});

struct McIntegral {
  double value;
  double standard_error;
};

/// Plain Monte Carlo over uniform simplex draws, with its standard error.
McIntegral integrate_simplex_mc(const SimplexIntegrand& f, std::size_t k,
                                std::size_t samples, RngState& rng);

/// Uniform draw on S_K (closure of K unit exponentials).
SimplexPoint sample_uniform_simplex(std::size_t k, RngState& rng);

/// Box for density-weighted integrands of C(beta, tau):
/// half-width (40 + max_ij |log(beta_i / beta_j)|) / tau around the origin.
QuadratureConfig density_quadrature(const PositiveWeights& beta, double tau,
                                    QuadratureConfig base = {});

}  // namespace concrete
