#include <algorithm>
#include <cmath>
#include <numbers>

#include "concrete_geom/moments.hpp"
#include "concrete_geom/special_functions.hpp"
#include "concrete_geom/verification.hpp"
#include "test_support.hpp"

namespace concrete {
namespace {

using testing::max_abs_diff;
using testing::random_point;
using testing::random_temperature;
using testing::random_weights;

double density_mass(const ConcreteParams& p) {
  return integrate_simplex(
      [&](const SimplexPoint& x) { return std::exp(concrete_log_density(p, x)); }, p.dim(),
      density_quadrature(p.beta(), p.tau()));
}

TEST(ConcreteParamsTest, Validation) {
  EXPECT_ERROR_CODE(ConcreteParams(PositiveWeights::ones(2), 0.0),
                    ErrorCode::NonPositiveTemperature);
  EXPECT_ERROR_CODE(ConcreteParams(PositiveWeights::ones(2), -1.0),
                    ErrorCode::NonPositiveTemperature);
  EXPECT_ERROR_CODE(ConcreteParams(PositiveWeights::ones(2), INFINITY),
                    ErrorCode::NonPositiveTemperature);
  EXPECT_ERROR_CODE(InverseSchlomilchParams(PositiveWeights::ones(3), PositiveWeights::ones(2), 1),
                    ErrorCode::DimMismatch);
  const ConcreteParams c = ConcreteParams(PositiveWeights({2.0, 6.0}), 1.0).canonical();
  EXPECT_EQ(c.beta()[0], 0.25);
}

TEST(ConcreteDensity, Examples) {
  const ConcreteParams flat(PositiveWeights({0.5, 0.5}), 1.0);
  EXPECT_NEAR(concrete_log_density(flat, SimplexPoint({0.3, 0.7})), 0.0, 1e-15);
  const ConcreteParams t2(PositiveWeights({0.5, 0.5}), 2.0);
  EXPECT_NEAR(concrete_log_density(t2, SimplexPoint({0.5, 0.5})), std::numbers::ln2, 1e-15);
  // Reference from tests/oracles/derive_values.py.
  const ConcreteParams k3(PositiveWeights({1, 2, 3}), 0.7);
  EXPECT_NEAR(concrete_log_density(k3, SimplexPoint({0.2, 0.3, 0.5})), 0.13058657931444344,
              1e-14);
}

TEST(ConcreteDensity, Errors) {
  const ConcreteParams p(PositiveWeights({1, 2}), 1.0);
  EXPECT_ERROR_CODE(concrete_log_density(p, SimplexPoint({0.2, 0.3, 0.5})),
                    ErrorCode::DimMismatch);
  EXPECT_ERROR_CODE(concrete_log_density(p, SimplexPoint({1e-301, 1.0})),
                    ErrorCode::BoundaryPoint);
}

TEST(ConcreteDensity, ScaleGauge) {
  RngState rng(21);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 2 + t % 4;
    const PositiveWeights b = random_weights(k, rng);
    const double tau = random_temperature(rng);
    const SimplexPoint x = random_point(k, rng);
    const double ref = concrete_log_density(ConcreteParams(b, tau), x);
    for (double lambda : {1e-6, 1.0, 1e6}) {
      std::vector<double> scaled(b.values().begin(), b.values().end());
      for (double& s : scaled) s *= lambda;
      EXPECT_NEAR(concrete_log_density(ConcreteParams(PositiveWeights(scaled), tau), x), ref,
                  1e-12 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST(ConcreteDensity, PermutationInvariantExactly) {
  RngState rng(22);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 3 + t % 3;
    const PositiveWeights b = random_weights(k, rng);
    const double tau = random_temperature(rng);
    // Dyadic components sum to exactly 1 in any order, so neither point is
    // renormalized on construction.
    std::vector<double> xs(k);
    double rest = 1024.0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      xs[i] = 1.0 + std::floor(rng.uniform() * (rest - double(k - i)) / 2.0);
      rest -= xs[i];
    }
    xs[k - 1] = rest;
    for (double& xi : xs) xi /= 1024.0;
    const SimplexPoint x(xs);
    std::vector<std::size_t> perm(k);
    for (std::size_t i = 0; i < k; ++i) perm[i] = (i + 1 + t) % k;
    std::vector<double> pb(k);
    std::vector<double> px(k);
    for (std::size_t i = 0; i < k; ++i) {
      pb[i] = b[perm[i]];
      px[i] = x[perm[i]];
    }
    const SimplexPoint y(px);
    ASSERT_EQ(concrete_log_density(ConcreteParams(b, tau), x),
              concrete_log_density(ConcreteParams(PositiveWeights(pb), tau), y));
  }
}

TEST(ConcreteDensity, Normalization) {
  for (const auto& b : {std::vector<double>{1, 1}, std::vector<double>{1, 2},
                        std::vector<double>{1, 2, 3}}) {
    for (double tau : {0.5, 1.0, 2.0, 5.0}) {
      const ConcreteParams p(PositiveWeights(b), tau);
      EXPECT_NEAR(density_mass(p), 1.0, b.size() == 2 ? 1e-6 : 1e-4)
          << "K=" << b.size() << " tau=" << tau;
    }
  }
}

TEST(IsDensity, ReducesToConcrete) {
  RngState rng(23);
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 2 + t % 4;
    const ConcreteParams p(random_weights(k, rng), random_temperature(rng));
    const SimplexPoint x = random_point(k, rng);
    EXPECT_NEAR(is_log_density(InverseSchlomilchParams::concrete(p), x),
                concrete_log_density(p, x), 1e-12);
  }
}

TEST(IsDensity, Examples) {
  const InverseSchlomilchParams p(PositiveWeights({2, 1}), PositiveWeights::ones(2), 1.0);
  EXPECT_NEAR(is_log_density(p, SimplexPoint({0.5, 0.5})), 0.0, 1e-15);
  const InverseSchlomilchParams q(PositiveWeights({2, 3, 0.5}), PositiveWeights({1, 2, 3}), 1.5);
  EXPECT_NEAR(is_log_density(q, SimplexPoint({0.1, 0.6, 0.3})), -1.6992579471930199, 1e-13);
}

TEST(IsDensity, Normalization) {
  const InverseSchlomilchParams p(PositiveWeights({2, 3}), PositiveWeights({1, 2}), 1.5);
  const double mass = integrate_simplex(
      [&](const SimplexPoint& x) { return std::exp(is_log_density(p, x)); }, 2,
      density_quadrature(p.beta(), p.tau()));
  EXPECT_NEAR(mass, 1.0, 1e-6);
}

TEST(LogNormConst, Examples) {
  EXPECT_NEAR(log_norm_const(ConcreteParams(PositiveWeights({0.5, 0.5}), 1.0)), std::log(4.0),
              1e-15);
  EXPECT_NEAR(log_norm_const(InverseSchlomilchParams(PositiveWeights({1, 1}),
                                                     PositiveWeights({0.5, 0.5}), 1.0)),
              std::log(4.0), 1e-15);
  EXPECT_NEAR(log_norm_const(InverseSchlomilchParams(PositiveWeights({2, 1}),
                                                     PositiveWeights::ones(2), 1.0)),
              std::log(0.5), 1e-15);
}

TEST(LogNormConst, SpecialRatio) {
  const PositiveWeights beta({1, 2, 3});
  const double tau = 0.8;
  const double j0 = log_norm_const(ConcreteParams(beta, tau));
  for (std::size_t m = 0; m < 3; ++m) {
    for (std::size_t n = 0; n < 3; ++n) {
      const double lj = log_norm_const(InverseSchlomilchParams(special_alpha(3, m, n), beta, tau));
      const double expected = (m == n ? 2.0 : 1.0) / (3.0 * 4.0 * beta[m] * beta[n]);
      EXPECT_NEAR(std::exp(lj - j0), expected, 1e-14);
    }
  }
}

TEST(LogNormConst, GradientMatchesFiniteDifference) {
  const PositiveWeights beta({1, 2, 0.5});
  const std::vector<double> alpha{1.3, 0.7, 2.2};
  const auto lj = [&](std::vector<double> a) {
    return log_norm_const(InverseSchlomilchParams(PositiveWeights(std::move(a)), beta, 1.4));
  };
  const std::vector<double> grad =
      log_norm_const_gradient(InverseSchlomilchParams(PositiveWeights(alpha), beta, 1.4));
  for (std::size_t i = 0; i < 3; ++i) {
    auto up = alpha;
    auto dn = alpha;
    up[i] += 1e-6;
    dn[i] -= 1e-6;
    EXPECT_NEAR((lj(up) - lj(dn)) / 2e-6, grad[i], 1e-8);
  }
}

TEST(Gumbel, Quantile) {
  EXPECT_NEAR(gumbel_from_uniform(std::exp(-1.0)), 0.0, 1e-16);
  EXPECT_ERROR_CODE(gumbel_from_uniform(0.0), ErrorCode::DomainError);
  EXPECT_ERROR_CODE(gumbel_from_uniform(1.0), ErrorCode::DomainError);
}

TEST(Gumbel, Moments) {
  RngState rng(31);
  constexpr std::size_t n = 1'000'000;
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double g = sample_standard_gumbel(rng);
    const double d = g - mean;
    mean += d / double(s + 1);
    m2 += d * (g - mean);
  }
  const double var = m2 / double(n - 1);
  const double sigma2 = std::numbers::pi * std::numbers::pi / 6.0;
  EXPECT_LT(std::abs(mean - std::numbers::egamma), 4.0 * std::sqrt(sigma2 / n));
  EXPECT_LT(std::abs(var - sigma2), 4.0 * sigma2 * std::sqrt(4.4 / n));
}

TEST(Sampling, EqualGumbelsGiveBarycentre) {
  const double w[] = {0.37, 0.37};
  for (double tau : {0.1, 1.0, 10.0}) {
    const SimplexPoint x = concrete_from_gumbel(ConcreteParams(PositiveWeights::ones(2), tau), w);
    EXPECT_EQ(x[0], 0.5);
  }
}

TEST(Sampling, Reproducible) {
  const ConcreteParams p(PositiveWeights({1, 2, 3}), 0.7);
  RngState a(42);
  RngState b(42);
  EXPECT_EQ(sample_concrete(p, a, 50), sample_concrete(p, b, 50));
  EXPECT_ERROR_CODE(sample_concrete(p, a, 0), ErrorCode::InvalidArgument);
}

TEST(Sampling, ArgmaxFrequencies) {
  const ConcreteParams p(PositiveWeights({1, 2, 3}), 0.7);
  RngState rng(41);
  constexpr std::size_t n = 100'000;
  std::vector<double> counts(3, 0.0);
  for (const SimplexPoint& x : sample_concrete(p, rng, n)) counts[round_to_vertex(x)] += 1.0;
  const double target[] = {1.0 / 6.0, 1.0 / 3.0, 0.5};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_LT(std::abs(counts[i] / n - target[i]),
              4.0 * std::sqrt(target[i] * (1 - target[i]) / n));
  }
}

TEST(Sampling, LogRatioMean) {
  const ConcreteParams p(PositiveWeights({2, 1}), 2.0);
  RngState rng(43);
  constexpr std::size_t n = 100'000;
  double sum = 0.0;
  double sq = 0.0;
  for (const SimplexPoint& x : sample_concrete(p, rng, n)) {
    const double l = std::log(x[0] / x[1]);
    sum += l;
    sq += l * l;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sq / n - mean * mean) / n);
  EXPECT_LT(std::abs(mean - 0.5 * std::numbers::ln2), 4.0 * se);
}

TEST(Sampling, KolmogorovSmirnovAgainstDensity) {
  for (double tau : {0.4, 1.0, 3.0}) {
    const ConcreteParams p(PositiveWeights({1.0, 2.5}), tau);
    RngState rng(44);
    constexpr std::size_t n = 100'000;
    const double d = ks_concrete_marginal(p, sample_concrete(p, rng, n));
    EXPECT_LT(d, ks_critical_value_1pct(n)) << "tau=" << tau;
  }
}

TEST(UniformTransform, Example) {
  const ConcreteParams p(PositiveWeights({0.5, 0.5}), 1.0);
  const SimplexPoint y = uniform_transform(p, SimplexPoint({0.3, 0.7}), TransformDirection::ToUniform);
  EXPECT_NEAR(y[0], 0.7, 1e-15);
  EXPECT_NEAR(y[1], 0.3, 1e-15);
}

TEST(UniformTransform, RoundTrip) {
  RngState rng(45);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 2 + t % 4;
    const ConcreteParams p(random_weights(k, rng), random_temperature(rng));
    const SimplexPoint x = random_point(k, rng);
    const SimplexPoint y = uniform_transform(p, x, TransformDirection::ToUniform);
    ASSERT_LT(max_abs_diff(uniform_transform(p, y, TransformDirection::FromUniform), x), 1e-10);
  }
}

TEST(UniformTransform, MapsConcreteToUniform) {
  const ConcreteParams p(PositiveWeights({1.0, 3.0}), 0.6);
  RngState rng(46);
  constexpr std::size_t n = 100'000;
  std::vector<double> first;
  for (const SimplexPoint& x : sample_concrete(p, rng, n)) {
    first.push_back(uniform_transform(p, x, TransformDirection::ToUniform)[0]);
  }
  double mean = 0.0;
  for (double f : first) mean += f / n;
  EXPECT_LT(std::abs(mean - 0.5), 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_LT(ks_statistic(first, [](double u) { return u; }), ks_critical_value_1pct(n));
}

TEST(EscortTransform, Examples) {
  RngState rng(47);
  const ConcreteParams p(PositiveWeights({1, 2, 4}), 1.7);
  for (int t = 0; t < 50; ++t) {
    const SimplexPoint x = random_point(3, rng);
    EXPECT_LT(max_abs_diff(escort_transform(p, x, -1),
                           uniform_transform(p, x, TransformDirection::ToUniform)),
              1e-15);
  }
  const SimplexPoint x({0.2, 0.8});
  EXPECT_LT(max_abs_diff(escort_transform(ConcreteParams(PositiveWeights::ones(2), 1.0), x, 1), x),
            1e-15);
  const SimplexPoint sq = escort_transform(ConcreteParams(PositiveWeights::ones(2), 2.0), x, 1);
  EXPECT_NEAR(sq[0], 1.0 / 17.0, 1e-15);
  EXPECT_ERROR_CODE(escort_transform(p, random_point(3, rng), 0), ErrorCode::InvalidArgument);
}

TEST(Rounding, Probabilities) {
  const RoundingProbabilities r = rounding_probabilities(PositiveWeights({1, 2, 3}));
  EXPECT_NEAR(r.probabilities[0], 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(r.probabilities[1], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.probabilities[2], 0.5, 1e-15);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(r.volume_ratios[i], r.probabilities[i], 1e-12);
  }
  const RoundingProbabilities u = rounding_probabilities(PositiveWeights::ones(5));
  for (double pi : u.probabilities) EXPECT_NEAR(pi, 0.2, 1e-15);
}

TEST(Rounding, UniformDrawMinimizingRatio) {
  const PositiveWeights beta({1, 2, 3});
  RngState rng(48);
  constexpr std::size_t n = 100'000;
  std::vector<double> counts(3, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    const SimplexPoint y = sample_uniform_simplex(3, rng);
    std::size_t best = 0;
    for (std::size_t i = 1; i < 3; ++i) {
      if (y[i] / beta[i] < y[best] / beta[best]) best = i;
    }
    counts[best] += 1.0;
  }
  const RoundingProbabilities r = rounding_probabilities(beta);
  for (std::size_t i = 0; i < 3; ++i) {
    const double p = r.probabilities[i];
    EXPECT_LT(std::abs(counts[i] / n - p), 4.0 * std::sqrt(p * (1 - p) / n));
  }
}

TEST(Rounding, ToVertex) {
  EXPECT_EQ(round_to_vertex(SimplexPoint({0.1, 0.7, 0.2})), 1u);
  EXPECT_EQ(round_to_vertex(SimplexPoint({0.5, 0.5})), 0u);
  RngState rng(49);
  for (int t = 0; t < 200; ++t) {
    const SimplexPoint x = random_point(4, rng);
    EXPECT_EQ(round_to_vertex(power(0.1 + 3.0 * rng.uniform(), x)), round_to_vertex(x));
  }
}

TEST(SufficientStatistic, Examples) {
  const ConcreteParams p(PositiveWeights({0.5, 0.5}), 1.0);
  const auto t = sufficient_statistic(p, SimplexPoint({0.5, 0.5}));
  EXPECT_NEAR(t[0], 0.0, 1e-15);
  EXPECT_NEAR(t[1], 0.0, 1e-15);
  RngState rng(50);
  const ConcreteParams q(PositiveWeights({1, 2, 5}), 1.3);
  for (int s = 0; s < 100; ++s) {
    const SimplexPoint x = random_point(3, rng);
    const auto ts = sufficient_statistic(q, x);
    EXPECT_NEAR(ts[0] - ts[2], -1.3 * std::log(x[0] / x[2]), 1e-12);
  }
}

TEST(SufficientStatistic, MeanIsNormalizerGradient) {
  const ConcreteParams p(PositiveWeights({1, 2, 3}), 1.5);
  const auto target = log_norm_const_gradient(InverseSchlomilchParams::concrete(p));
  RngState rng(51);
  constexpr std::size_t n = 100'000;
  std::vector<double> sum(3, 0.0);
  std::vector<double> sq(3, 0.0);
  for (const SimplexPoint& x : sample_concrete(p, rng, n)) {
    const auto t = sufficient_statistic(p, x);
    for (std::size_t i = 0; i < 3; ++i) {
      sum[i] += t[i];
      sq[i] += t[i] * t[i];
    }
  }
  for (std::size_t i = 0; i < 3; ++i) {
    const double mean = sum[i] / n;
    const double se = std::sqrt((sq[i] / n - mean * mean) / n);
    EXPECT_LT(std::abs(mean - target[i]), 4.0 * se) << i;
  }
}

}  // namespace
}  // namespace concrete
