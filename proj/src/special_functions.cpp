#include "concrete_geom/special_functions.hpp"

#include <math.h>

#include <cmath>
#include <string>

#include "concrete_geom/error.hpp"

namespace concrete::special {

namespace {

// Asymptotic series are applied once the argument has been lifted to this
// value; the first omitted Bernoulli term is then below 1e-15.
constexpr double kAsymptoticFrom = 10.0;

void require_positive(double x, const char* name) {
  if (!std::isfinite(x) || x <= 0.0) {
    fail(ErrorCode::DomainError,
         std::string(name) + ": argument must be positive and finite, got " +
             std::to_string(x));
  }
}

}  // namespace

double digamma(double x) {
  require_positive(x, "digamma");
  double shift = 0.0;
  while (x < kAsymptoticFrom) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double t = inv * inv;
  // Bernoulli terms B_2n / (2n x^2n), n = 1..6.
  const double series =
      t * (1.0 / 12 -
           t * (1.0 / 120 -
                t * (1.0 / 252 -
                     t * (1.0 / 240 - t * (1.0 / 132 - t * (691.0 / 32760))))));
  return shift + std::log(x) - 0.5 * inv - series;
}

double trigamma(double x) {
  require_positive(x, "trigamma");
  double shift = 0.0;
  while (x < kAsymptoticFrom) {
    shift += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double t = inv * inv;
  // 1/x + 1/(2x^2) + sum_n B_2n / x^(2n+1), n = 1..6.
  const double series =
      inv * t *
      (1.0 / 6 -
       t * (1.0 / 30 -
            t * (1.0 / 42 -
                 t * (1.0 / 30 - t * (5.0 / 66 - t * (691.0 / 2730))))));
  return shift + inv + 0.5 * t + series;
}

double log_gamma(double x) {
  require_positive(x, "log_gamma");
  int sign = 0;
  // Reentrant variant: lgamma writes the global signgam.
  return ::lgamma_r(x, &sign);
}

}  // namespace concrete::special
