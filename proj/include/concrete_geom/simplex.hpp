#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace concrete {

/// Absolute tolerance on the unit sum accepted when constructing a point.
inline constexpr double kUnitSumTolerance = 1e-12;

/// A point of the open probability simplex S_K (K >= 2).
///
/// Components are strictly positive and finite. Input whose sum lies within
/// kUnitSumTolerance of one is renormalized; anything further away is
/// rejected with DomainError. A zero or negative component is BoundaryPoint,
/// a non-finite one NonPositiveEntry.
class SimplexPoint {
 public:
  explicit SimplexPoint(std::vector<double> components);

  /// Barycentre (1/K, ..., 1/K).
  static SimplexPoint uniform(std::size_t dim);

  std::size_t dim() const noexcept { return x_.size(); }
  std::span<const double> components() const noexcept { return x_; }
  double operator[](std::size_t i) const { return x_[i]; }

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

 private:
  struct Normalized {};
  SimplexPoint(Normalized, std::vector<double> components) noexcept
      : x_(std::move(components)) {}

  friend SimplexPoint closure(std::span<const double>);

  std::vector<double> x_;
};

/// Unnormalized strictly positive weights; no scale gauge is imposed.
class PositiveWeights {
 public:
  explicit PositiveWeights(std::vector<double> weights);

  /// The all-ones vector of length dim.
  static PositiveWeights ones(std::size_t dim);

  std::size_t dim() const noexcept { return w_.size(); }
  std::span<const double> values() const noexcept { return w_; }
  double operator[](std::size_t i) const { return w_[i]; }

  double sum() const noexcept;
  std::vector<double> logs() const;

  /// Same direction rescaled so that the weights sum to one.
  PositiveWeights normalized() const;

 private:
  std::vector<double> w_;
};

/// Additive log-ratio coordinates y_a = log(x_a / x_K), a = 1..K-1.
class LogRatioPoint {
 public:
  explicit LogRatioPoint(std::vector<double> coords);

  std::size_t dim() const noexcept { return y_.size(); }
  std::span<const double> coords() const noexcept { return y_; }
  double operator[](std::size_t i) const { return y_[i]; }

 private:
  std::vector<double> y_;
};

/// x / sum(x). Entries must be positive and finite (NonPositiveEntry).
/// Inputs are rescaled by their maximum before summation so that tiny
/// entries do not underflow. closure(closure(v)) == closure(v) bit for bit.
SimplexPoint closure(std::span<const double> v);

/// Aitchison perturbation: closure of the component-wise product.
SimplexPoint perturb(const SimplexPoint& x, const SimplexPoint& y);

/// Aitchison powering: closure of the component-wise a-th power.
SimplexPoint power(double a, const SimplexPoint& x);

/// exp(logits) followed by closure, evaluated with max-subtraction.
/// Components that would underflow are floored at the smallest normal double.
SimplexPoint softmax(std::span<const double> logits);

/// log(sum_i exp(v_i)) with max-subtraction.
double log_sum_exp(std::span<const double> v);

LogRatioPoint alr_forward(const SimplexPoint& x);
SimplexPoint alr_inverse(const LogRatioPoint& y);

}  // namespace concrete
