#pragma once

#include <numbers>

namespace concrete::special {

struct SpecialConstants {
  static constexpr double euler_gamma = std::numbers::egamma;
  static constexpr double pi_sq_over_6 = std::numbers::pi * std::numbers::pi / 6.0;
};

// All three throw DomainError for x <= 0 or non-finite x.

/// Digamma psi(x) = d/dx log Gamma(x).
double digamma(double x);

/// Trigamma psi'(x).
double trigamma(double x);

/// log Gamma(x) for x > 0.
double log_gamma(double x);

}  // namespace concrete::special
