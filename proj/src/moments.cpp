#include "concrete_geom/moments.hpp"

#include <cmath>
#include <initializer_list>
#include <numbers>
#include <string>

#include "concrete_geom/error.hpp"
#include "concrete_geom/special_functions.hpp"

namespace concrete {

namespace {

void require_indices(std::size_t k, std::initializer_list<std::size_t> idx) {
  for (std::size_t v : idx) {
    if (v >= k) {
      fail(ErrorCode::IndexOutOfRange,
           "index " + std::to_string(v) + " out of range for K = " +
               std::to_string(k));
    }
  }
}

// Generalized Kronecker deltas: 1 when all indices coincide.
double d(std::size_t a, std::size_t b) { return a == b ? 1.0 : 0.0; }
double d(std::size_t a, std::size_t b, std::size_t c) { return d(a, b) * d(a, c); }
double d(std::size_t a, std::size_t b, std::size_t c, std::size_t e) {
  return d(a, b) * d(a, c) * d(a, e);
}

}  // namespace

double lr_mean(const InverseSchlomilchParams& p, std::size_t i, std::size_t k) {
  require_indices(p.dim(), {i, k});
  if (i == k) return 0.0;
  const auto& a = p.alpha();
  const auto& b = p.beta();
  const double psi_diff = special::digamma(a[k]) - special::digamma(a[i]);
  const double log_diff = std::log(b[i]) - std::log(b[k]);
  return (psi_diff + log_diff) / p.tau();
}

double lr_cov(const InverseSchlomilchParams& p, std::size_t i, std::size_t k,
              std::size_t j, std::size_t l) {
  require_indices(p.dim(), {i, k, j, l});
  const auto& a = p.alpha();
  const double tau2 = p.tau() * p.tau();
  return ((d(i, j) - d(i, l)) * special::trigamma(a[i]) -
          (d(k, j) - d(k, l)) * special::trigamma(a[k])) /
         tau2;
}

double lr_var(const InverseSchlomilchParams& p, std::size_t i, std::size_t k) {
  require_indices(p.dim(), {i, k});
  const auto& a = p.alpha();
  const double tau2 = p.tau() * p.tau();
  return (1.0 - d(i, k)) *
         (special::trigamma(a[i]) + special::trigamma(a[k])) / tau2;
}

PositiveWeights special_alpha(std::size_t k, std::size_t m, std::size_t n) {
  require_indices(k, {m, n});
  std::vector<double> a(k, 1.0);
  a[m] += 1.0;
  a[n] += 1.0;
  return PositiveWeights(std::move(a));
}

double special_lr_mean(const PositiveWeights& beta, double tau, std::size_t m,
                       std::size_t n, std::size_t i, std::size_t k) {
  require_indices(beta.dim(), {m, n, i, k});
  // The triple-delta terms enter with these signs: at m = n the shift is
  // psi(3) - psi(1) = 3/2, not 5/2.
  const double s = -d(i, m) - d(i, n) + d(k, m) + d(k, n) + 0.5 * d(i, m, n) -
                   0.5 * d(k, m, n) + std::log(beta[i]) -
                   std::log(beta[k]);
  return s / tau;
}

double raw_second_moment_special(const PositiveWeights& beta, double tau,
                                 std::size_t m, std::size_t n, std::size_t i,
                                 std::size_t k, std::size_t l) {
  require_indices(beta.dim(), {m, n, i, k, l});
  const double lbi = std::log(beta[i]);
  const double lbk = std::log(beta[k]);
  const double lbl = std::log(beta[l]);
  constexpr double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;

  double s = d(i, m, n) + d(i, l, m, n) + d(i, k, m, n) - d(k, l, m, n) -
             d(i, m) * d(k, n) - d(i, m) * d(l, n) - d(i, n) * d(k, m) -
             d(i, n) * d(l, m) + d(k, m) * d(l, n) + d(k, n) * d(l, m);
  s -= (2 * d(i, m) + 2 * d(i, n) - d(k, m) - d(k, n) - d(l, m) - d(l, n) -
        d(i, m, n) + 0.5 * d(k, m, n) + 0.5 * d(l, m, n)) *
       lbi;
  s += (d(i, m) + d(i, n) - d(k, m) - d(k, n) - 0.5 * d(i, m, n) +
        0.5 * d(k, m, n)) *
       lbl;
  s += (d(i, m) + d(i, n) - d(l, m) - d(l, n) - 0.5 * d(i, m, n) +
        0.5 * d(l, m, n)) *
       lbk;
  s += (lbi - lbk) * (lbi - lbl);
  s += (1 - d(i, k) - d(i, l) + d(k, l)) * pi2_6;
  return s / (tau * tau);
}

}  // namespace concrete
