#include "concrete_geom/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "concrete_geom/error.hpp"

namespace concrete {

namespace {

double plain_sum(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

// Brings a positive vector onto the unit-sum hyperplane. Vectors already on
// it to within a few ulps are returned unchanged, which makes closure
// idempotent bit for bit.
std::vector<double> normalize_positive(std::span<const double> v) {
  std::vector<double> c(v.begin(), v.end());
  const double slack = 4.0 * double(c.size()) * std::numeric_limits<double>::epsilon();
  if (std::abs(plain_sum(c) - 1.0) <= slack) return c;

  const double m = *std::max_element(c.begin(), c.end());
  for (double& ci : c) ci /= m;
  const double s = plain_sum(c);
  for (double& ci : c) ci /= s;
  return c;
}

void require_dim(std::size_t k, const char* what) {
  if (k < 2) {
    fail(ErrorCode::DomainError,
         std::string(what) + ": dimension must be at least 2, got " +
             std::to_string(k));
  }
}

}  // namespace

SimplexPoint::SimplexPoint(std::vector<double> components) {
  require_dim(components.size(), "SimplexPoint");
  for (std::size_t i = 0; i < components.size(); ++i) {
    const double xi = components[i];
    if (!std::isfinite(xi)) {
      fail(ErrorCode::NonPositiveEntry,
           "SimplexPoint: component " + std::to_string(i) + " is not finite");
    }
    if (xi <= 0.0) {
      fail(ErrorCode::BoundaryPoint,
           "SimplexPoint: component " + std::to_string(i) +
               " is not strictly positive");
    }
  }
  const double s = plain_sum(components);
  if (std::abs(s - 1.0) > kUnitSumTolerance) {
    fail(ErrorCode::DomainError,
         "SimplexPoint: components sum to " + std::to_string(s) +
             ", not 1 within tolerance");
  }
  x_ = normalize_positive(components);
}

SimplexPoint SimplexPoint::uniform(std::size_t dim) {
  require_dim(dim, "SimplexPoint::uniform");
  return closure(std::vector<double>(dim, 1.0));
}

PositiveWeights::PositiveWeights(std::vector<double> weights)
    : w_(std::move(weights)) {
  require_dim(w_.size(), "PositiveWeights");
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (!std::isfinite(w_[i]) || w_[i] <= 0.0) {
      fail(ErrorCode::NonPositiveEntry,
           "PositiveWeights: entry " + std::to_string(i) +
               " must be positive and finite");
    }
  }
}

PositiveWeights PositiveWeights::ones(std::size_t dim) {
  return PositiveWeights(std::vector<double>(dim, 1.0));
}

double PositiveWeights::sum() const noexcept { return plain_sum(w_); }

std::vector<double> PositiveWeights::logs() const {
  std::vector<double> out(w_.size());
  std::transform(w_.begin(), w_.end(), out.begin(),
                 [](double w) { return std::log(w); });
  return out;
}

PositiveWeights PositiveWeights::normalized() const {
  const SimplexPoint c = closure(w_);
  return PositiveWeights({c.components().begin(), c.components().end()});
}

LogRatioPoint::LogRatioPoint(std::vector<double> coords)
    : y_(std::move(coords)) {
  if (y_.empty()) {
    fail(ErrorCode::DomainError, "LogRatioPoint: needs at least 1 coordinate");
  }
  for (double y : y_) {
    if (!std::isfinite(y)) {
      fail(ErrorCode::DomainError, "LogRatioPoint: coordinates must be finite");
    }
  }
}

SimplexPoint closure(std::span<const double> v) {
  require_dim(v.size(), "closure");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] <= 0.0) {
      fail(ErrorCode::NonPositiveEntry,
           "closure: entry " + std::to_string(i) +
               " must be positive and finite");
    }
  }
  return SimplexPoint(SimplexPoint::Normalized{}, normalize_positive(v));
}

double log_sum_exp(std::span<const double> v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double vi : v) s += std::exp(vi - m);
  return m + std::log(s);
}

SimplexPoint softmax(std::span<const double> logits) {
  require_dim(logits.size(), "softmax");
  const double m = *std::max_element(logits.begin(), logits.end());
  if (!std::isfinite(m)) {
    fail(ErrorCode::DomainError, "softmax: logits must be finite");
  }
  std::vector<double> e(logits.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!std::isfinite(logits[i])) {
      fail(ErrorCode::DomainError, "softmax: logits must be finite");
    }
    e[i] = std::max(std::exp(logits[i] - m),
                    std::numeric_limits<double>::min());
  }
  return closure(e);
}

SimplexPoint perturb(const SimplexPoint& x, const SimplexPoint& y) {
  if (x.dim() != y.dim()) {
    fail(ErrorCode::DimMismatch, "perturb: dimension mismatch");
  }
  std::vector<double> logits(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    logits[i] = std::log(x[i]) + std::log(y[i]);
  }
  return softmax(logits);
}

SimplexPoint power(double a, const SimplexPoint& x) {
  if (!std::isfinite(a)) {
    fail(ErrorCode::DomainError, "power: exponent must be finite");
  }
  std::vector<double> logits(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) logits[i] = a * std::log(x[i]);
  return softmax(logits);
}

LogRatioPoint alr_forward(const SimplexPoint& x) {
  const std::size_t k = x.dim();
  for (double xi : x.components()) {
    if (xi < std::numeric_limits<double>::min()) {
      fail(ErrorCode::BoundaryPoint, "alr_forward: point on the boundary");
    }
  }
  const double log_last = std::log(x[k - 1]);
  std::vector<double> y(k - 1);
  for (std::size_t a = 0; a + 1 < k; ++a) y[a] = std::log(x[a]) - log_last;
  return LogRatioPoint(std::move(y));
}

SimplexPoint alr_inverse(const LogRatioPoint& y) {
  std::vector<double> logits(y.coords().begin(), y.coords().end());
  logits.push_back(0.0);
  return softmax(logits);
}

}  // namespace concrete
