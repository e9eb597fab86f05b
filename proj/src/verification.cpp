#include "concrete_geom/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <string>
#include <thread>

#include "concrete_geom/error.hpp"
#include "concrete_geom/info_geometry.hpp"
#include "concrete_geom/json_writer.hpp"
#include "concrete_geom/moments.hpp"
#include "concrete_geom/special_functions.hpp"

namespace concrete {

namespace {

using Eigen::Index;

struct Estimate {
  double value;
  double se;
};

// Self-normalized draws: points from C(beta, tau), weights summing to one.
struct WeightedDraws {
  std::vector<SimplexPoint> points;
  std::vector<double> weights;
  double effective_sample_size;
};

WeightedDraws normalize_weights(std::vector<SimplexPoint> points,
                                std::vector<double> log_w) {
  const double m = *std::max_element(log_w.begin(), log_w.end());
  double total = 0.0;
  for (double& lw : log_w) {
    lw = std::exp(lw - m);
    total += lw;
  }
  double sq = 0.0;
  for (double& w : log_w) {
    w /= total;
    sq += w * w;
  }
  return {std::move(points), std::move(log_w), 1.0 / sq};
}

// Proposal C(beta, tau min(1, min_i alpha_i)). Its log-ratio tails decay no
// faster than the target's, which keeps the weights bounded when some
// alpha_i < 1; otherwise it is the base law and log(g/h) reduces to
// (K - alpha_+) log k - tau sum_i (alpha_i - 1) log x_i.
WeightedDraws draw_weighted(const InverseSchlomilchParams& p, std::size_t n,
                            RngState& rng) {
  const double alpha_min =
      *std::min_element(p.alpha().values().begin(), p.alpha().values().end());
  const ConcreteParams proposal(p.beta(), p.tau() * std::min(1.0, alpha_min));
  std::vector<SimplexPoint> points = sample_concrete(proposal, rng, n);
  std::vector<double> log_w(n);
  for (std::size_t s = 0; s < n; ++s) {
    log_w[s] = log_g(p, points[s]) - log_h(proposal, points[s]);
  }
  return normalize_weights(std::move(points), std::move(log_w));
}

Estimate weighted_mean(const std::vector<double>& w, const std::vector<double>& f) {
  double mu = 0.0;
  for (std::size_t s = 0; s < f.size(); ++s) mu += w[s] * f[s];
  double var = 0.0;
  for (std::size_t s = 0; s < f.size(); ++s) {
    var += w[s] * w[s] * (f[s] - mu) * (f[s] - mu);
  }
  return {mu, std::sqrt(var)};
}

Estimate weighted_cov(const std::vector<double>& w, const std::vector<double>& f,
                      const std::vector<double>& g) {
  const double mf = weighted_mean(w, f).value;
  const double mg = weighted_mean(w, g).value;
  std::vector<double> c(f.size());
  for (std::size_t s = 0; s < f.size(); ++s) c[s] = (f[s] - mf) * (g[s] - mg);
  return weighted_mean(w, c);
}

std::vector<double> log_ratios(const std::vector<SimplexPoint>& pts,
                               std::size_t i, std::size_t k) {
  std::vector<double> out(pts.size());
  for (std::size_t s = 0; s < pts.size(); ++s) {
    out[s] = std::log(pts[s][i]) - std::log(pts[s][k]);
  }
  return out;
}

std::string fmt(const char* pattern, auto... args) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

std::string describe(std::span<const double> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += fmt("%g", v[i]);
  }
  return out;
}

std::string describe(const ConcreteParams& p) {
  return "C(beta=" + describe(p.beta().values()) + ";tau=" + fmt("%g", p.tau()) + ")";
}

std::string describe(const InverseSchlomilchParams& p) {
  return "IS(alpha=" + describe(p.alpha().values()) +
         ";beta=" + describe(p.beta().values()) + ";tau=" + fmt("%g", p.tau()) + ")";
}

// beta(theta) for reduced coordinates theta = (beta_1..beta_{K-1}, tau).
ConcreteParams from_reduced(const Eigen::VectorXd& theta) {
  const Index k = theta.size();
  std::vector<double> b(std::size_t(k), 0.0);
  double rest = 1.0;
  for (Index a = 0; a + 1 < k; ++a) {
    b[std::size_t(a)] = theta(a);
    rest -= theta(a);
  }
  b[std::size_t(k - 1)] = rest;
  return ConcreteParams(PositiveWeights(std::move(b)), theta(k - 1));
}

Eigen::VectorXd to_reduced(const ConcreteParams& canonical) {
  const std::size_t k = canonical.dim();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(Index(k));
  for (std::size_t a = 0; a + 1 < k; ++a) theta(Index(a)) = canonical.beta()[a];
  theta(Index(k - 1)) = canonical.tau();
  return theta;
}

}  // namespace

Check se_check(std::string name, double target, double estimate, double se) {
  const bool pass = std::isfinite(estimate) &&
                    std::abs(estimate - target) <= kSeBand * se + 1e-12;
  return {std::move(name), target, estimate, se, pass};
}

Check tol_check(std::string name, double target, double estimate, double tol) {
  const bool pass = std::isfinite(estimate) && std::abs(estimate - target) <= tol;
  return {std::move(name), target, estimate, tol, pass};
}

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.pass; });
}

bool LogRatioMomentReport::all_pass() const {
  return concrete::all_pass(means) && concrete::all_pass(covariances);
}

LogRatioMomentReport mc_log_ratio_moments(const InverseSchlomilchParams& p,
                                          std::size_t n, RngState& rng) {
  if (n < 1000) {
    fail(ErrorCode::InvalidArgument, "mc_log_ratio_moments: n must be >= 1000");
  }
  const WeightedDraws draws = draw_weighted(p, n, rng);
  if (draws.effective_sample_size < double(n) / 100.0) {
    fail(ErrorCode::DegenerateWeights,
         "mc_log_ratio_moments: effective sample size " +
             std::to_string(draws.effective_sample_size) + " below n/100");
  }
  const std::size_t k = p.dim();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  }
  std::vector<std::vector<double>> ratios;
  for (auto [i, j] : pairs) ratios.push_back(log_ratios(draws.points, i, j));

  LogRatioMomentReport report;
  report.effective_sample_size = draws.effective_sample_size;
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    const auto [i, kk] = pairs[a];
    const Estimate e = weighted_mean(draws.weights, ratios[a]);
    report.means.push_back(se_check(fmt("mean[%zu,%zu]", i + 1, kk + 1),
                                    lr_mean(p, i, kk), e.value, e.se));
  }
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    for (std::size_t b = a; b < pairs.size(); ++b) {
      const auto [i, kk] = pairs[a];
      const auto [j, l] = pairs[b];
      const Estimate e = weighted_cov(draws.weights, ratios[a], ratios[b]);
      report.covariances.push_back(
          se_check(fmt("cov[%zu,%zu;%zu,%zu]", i + 1, kk + 1, j + 1, l + 1),
                   lr_cov(p, i, kk, j, l), e.value, e.se));
      if (a == b) {
        report.covariances.push_back(se_check(fmt("var[%zu,%zu]", i + 1, kk + 1),
                                              lr_var(p, i, kk), e.value, e.se));
      }
    }
  }
  return report;
}

LogRatioMomentReport mc_log_ratio_moments(const ConcreteParams& p, std::size_t n,
                                          RngState& rng) {
  return mc_log_ratio_moments(InverseSchlomilchParams::concrete(p), n, rng);
}

std::vector<Check> mc_special_moments(const PositiveWeights& beta, double tau,
                                      std::size_t n, RngState& rng,
                                      bool symmetric_only) {
  const std::size_t k = beta.dim();
  const ConcreteParams base(beta, tau);
  const std::vector<SimplexPoint> points = sample_concrete(base, rng, n);

  std::vector<double> lk(n);
  std::vector<std::vector<double>> lx(k, std::vector<double>(n));
  for (std::size_t s = 0; s < n; ++s) {
    lk[s] = log_k(beta, tau, points[s]);
    for (std::size_t i = 0; i < k; ++i) lx[i][s] = std::log(points[s][i]);
  }

  std::vector<Check> checks;
  for (std::size_t m = 0; m < k; ++m) {
    for (std::size_t nn = symmetric_only ? m : 0; nn < k; ++nn) {
      // Weights proportional to 1 / (k(x)^2 x_m^tau x_n^tau).
      std::vector<double> log_w(n);
      for (std::size_t s = 0; s < n; ++s) {
        log_w[s] = -2.0 * lk[s] - tau * (lx[m][s] + lx[nn][s]);
      }
      const WeightedDraws d = normalize_weights({}, std::move(log_w));
      const auto& w = d.weights;

      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t kk = 0; kk < k; ++kk) {
          if (i == kk) continue;
          std::vector<double> f(n);
          for (std::size_t s = 0; s < n; ++s) f[s] = lx[i][s] - lx[kk][s];
          const Estimate e = weighted_mean(w, f);
          checks.push_back(se_check(
              fmt("special_mean[m=%zu,n=%zu;%zu,%zu]", m + 1, nn + 1, i + 1, kk + 1),
              special_lr_mean(beta, tau, m, nn, i, kk), e.value, e.se));
        }
      }
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t kk = 0; kk < k; ++kk) {
          for (std::size_t l = symmetric_only ? kk : 0; l < k; ++l) {
            std::vector<double> f(n);
            for (std::size_t s = 0; s < n; ++s) {
              f[s] = (lx[i][s] - lx[kk][s]) * (lx[i][s] - lx[l][s]);
            }
            const Estimate e = weighted_mean(w, f);
            checks.push_back(se_check(
                fmt("special_raw[m=%zu,n=%zu;%zu,%zu,%zu]", m + 1, nn + 1, i + 1,
                    kk + 1, l + 1),
                raw_second_moment_special(beta, tau, m, nn, i, kk, l), e.value,
                e.se));
          }
        }
      }
    }
  }
  return checks;
}

double special_moment_identity_error(const PositiveWeights& beta, double tau) {
  const std::size_t k = beta.dim();
  double worst = 0.0;
  for (std::size_t m = 0; m < k; ++m) {
    for (std::size_t n = 0; n < k; ++n) {
      const InverseSchlomilchParams p(special_alpha(k, m, n), beta, tau);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t kk = 0; kk < k; ++kk) {
          worst = std::max(worst, std::abs(special_lr_mean(beta, tau, m, n, i, kk) -
                                           lr_mean(p, i, kk)));
          for (std::size_t l = 0; l < k; ++l) {
            const double raw = raw_second_moment_special(beta, tau, m, n, i, kk, l);
            const double split = lr_cov(p, i, kk, i, l) +
                                 special_lr_mean(beta, tau, m, n, i, kk) *
                                     special_lr_mean(beta, tau, m, n, i, l);
            worst = std::max(worst, std::abs(raw - split));
          }
        }
      }
    }
  }
  return worst;
}

ScoreFisherReport mc_score_fisher(const ConcreteParams& p, std::size_t n,
                                  double h, RngState& rng) {
  if (n < 10'000) {
    fail(ErrorCode::InvalidArgument, "mc_score_fisher: n must be >= 10^4");
  }
  if (!(h > 0.0) || !(h < 0.1)) {
    fail(ErrorCode::InvalidArgument, "mc_score_fisher: step must lie in (0, 0.1)");
  }
  const ConcreteParams c = p.canonical();
  const Index k = Index(c.dim());
  const Eigen::VectorXd theta = to_reduced(c);

  std::vector<ConcreteParams> plus;
  std::vector<ConcreteParams> minus;
  Eigen::VectorXd step(k);
  for (Index a = 0; a < k; ++a) {
    step(a) = h * theta(a);
    Eigen::VectorXd tp = theta;
    Eigen::VectorXd tm = theta;
    tp(a) += step(a);
    tm(a) -= step(a);
    plus.push_back(from_reduced(tp));
    minus.push_back(from_reduced(tm));
  }

  const std::vector<SimplexPoint> points = sample_concrete(c, rng, n);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(k, k);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd score_sum = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd score_sq = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd score(k);
  for (const SimplexPoint& x : points) {
    for (Index a = 0; a < k; ++a) {
      score(a) = (concrete_log_density(plus[std::size_t(a)], x) -
                  concrete_log_density(minus[std::size_t(a)], x)) /
                 (2.0 * step(a));
    }
    const Eigen::MatrixXd outer = score * score.transpose();
    sum += outer;
    sum_sq += outer.cwiseProduct(outer);
    score_sum += score;
    score_sq += score.cwiseProduct(score);
  }
  const double nd = double(n);
  ScoreFisherReport r;
  r.estimate = sum / nd;
  r.standard_error =
      ((sum_sq / nd - r.estimate.cwiseProduct(r.estimate)) / nd).cwiseMax(0.0).cwiseSqrt();
  r.score_mean = score_sum / nd;
  r.score_mean_se =
      ((score_sq / nd - r.score_mean.cwiseProduct(r.score_mean)) / nd).cwiseMax(0.0).cwiseSqrt();
  r.target = fisher_reduced(c).matrix();

  for (Index a = 0; a < k; ++a) {
    r.checks.push_back(se_check(fmt("score_mean[%td]", a + 1), 0.0, r.score_mean(a),
                                r.score_mean_se(a)));
  }
  for (Index a = 0; a < k; ++a) {
    for (Index b = a; b < k; ++b) {
      r.checks.push_back(se_check(fmt("score_fisher[%td,%td]", a + 1, b + 1),
                                  r.target(a, b), r.estimate(a, b),
                                  r.standard_error(a, b)));
    }
  }
  return r;
}

Eigen::MatrixXd log_norm_hessian(const ConcreteParams& p) {
  const Index k = Index(p.dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k + 1, k + 1);
  for (Index i = 0; i < k; ++i) {
    const double b = p.beta()[std::size_t(i)];
    m(i, i) = 1.0 / (b * b);
  }
  m(k, k) = double(k - 1) / (p.tau() * p.tau());
  return m;
}

QuadFisherResult quad_fisher(const ConcreteParams& p, const QuadratureConfig& base) {
  if (p.dim() != 2) {
    fail(ErrorCode::UnsupportedDim, "quad_fisher: only K = 2 is supported");
  }
  const ConcreteParams c = p.canonical();
  const std::size_t k = c.dim();
  const double kk = double(k);
  const double tau = c.tau();
  QuadratureConfig cfg = density_quadrature(c.beta(), tau, base);
  cfg.mode = QuadratureConfig::Mode::Deterministic;

  // u_l = (beta_l / x_l^tau) / k(x); then 1/(k x_i^tau) = u_i / beta_i and
  // sum_l (beta_l/x_l^tau) log x_l / k = sum_l u_l log x_l.
  const auto second_derivative = [&](const SimplexPoint& x, std::size_t a,
                                     std::size_t b) {
    std::vector<double> logits(k);
    for (std::size_t l = 0; l < k; ++l) {
      logits[l] = std::log(c.beta()[l]) - tau * std::log(x[l]);
    }
    const SimplexPoint u = softmax(logits);
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t l = 0; l < k; ++l) {
      const double lx = std::log(x[l]);
      m1 += u[l] * lx;
      m2 += u[l] * lx * lx;
    }
    if (a < k && b < k) {
      return kk * u[a] * u[b] / (c.beta()[a] * c.beta()[b]);
    }
    if (a == k && b == k) return kk * (m1 * m1 - m2);
    const std::size_t i = std::min(a, b);
    return kk * (u[i] / c.beta()[i]) * (std::log(x[i]) - m1);
  };

  QuadFisherResult r;
  r.log_norm_term = log_norm_hessian(c);
  r.h_term = Eigen::MatrixXd::Zero(Index(k + 1), Index(k + 1));
  for (std::size_t a = 0; a <= k; ++a) {
    for (std::size_t b = a; b <= k; ++b) {
      const double v = integrate_simplex(
          [&](const SimplexPoint& x) {
            return std::exp(concrete_log_density(c, x)) * second_derivative(x, a, b);
          },
          k, cfg);
      r.h_term(Index(a), Index(b)) = v;
      r.h_term(Index(b), Index(a)) = v;
    }
  }
  r.full = r.log_norm_term - r.h_term;
  r.reduced = reduce_fisher(r.full);
  return r;
}

PullbackResult pullback_metric_check(const ConcreteParams& p, double h) {
  if (!(h > 0.0) || !(h < 0.1)) {
    fail(ErrorCode::InvalidArgument, "pullback_metric_check: step must lie in (0, 0.1)");
  }
  const ConcreteParams c = p.canonical();
  const Index k = Index(c.dim());
  const PoincarePoint q = to_poincare(c);

  Eigen::VectorXd eta(k);
  for (Index a = 0; a + 1 < k; ++a) eta(a) = q.eta[std::size_t(a)];
  eta(k - 1) = q.eta_k;

  const auto theta_of = [&](const Eigen::VectorXd& e) {
    std::vector<double> coords(e.data(), e.data() + k - 1);
    return to_reduced(from_poincare(PoincarePoint(std::move(coords), e(k - 1), q.ell)));
  };

  Eigen::MatrixXd jac(k, k);
  for (Index col = 0; col < k; ++col) {
    const double s = h * std::max(1.0, std::abs(eta(col)));
    Eigen::VectorXd ep = eta;
    Eigen::VectorXd em = eta;
    ep(col) += s;
    em(col) -= s;
    jac.col(col) = (theta_of(ep) - theta_of(em)) / (2.0 * s);
  }

  PullbackResult r;
  r.pulled = jac.transpose() * fisher_reduced(c).matrix() * jac;
  r.scale = q.ell * q.ell / (q.eta_k * q.eta_k);
  r.max_deviation =
      (r.pulled - r.scale * Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
  return r;
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty()) fail(ErrorCode::InvalidArgument, "ks_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = double(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, double(i + 1) / n - f, f - double(i) / n});
  }
  return d;
}

double ks_critical_value_1pct(std::size_t n) {
  // sqrt(-log(0.01 / 2) / 2) / sqrt(n)
  return std::sqrt(-0.5 * std::log(0.005)) / std::sqrt(double(n));
}

double ks_concrete_marginal(const ConcreteParams& p,
                            const std::vector<SimplexPoint>& samples) {
  if (p.dim() != 2) {
    fail(ErrorCode::UnsupportedDim, "ks_concrete_marginal: only K = 2 is supported");
  }
  if (samples.empty()) fail(ErrorCode::InvalidArgument, "ks_concrete_marginal: no samples");
  // Density of y = log(x_1 / x_2) is f(x(y)) x_1 x_2.
  const auto density_y = [&](double y) {
    const double logits[2] = {y, 0.0};
    const SimplexPoint x = softmax(logits);
    if (x[0] < kBoundaryThreshold || x[1] < kBoundaryThreshold) return 0.0;
    return std::exp(concrete_log_density(p, x)) * x[0] * x[1];
  };
  std::vector<double> ys;
  ys.reserve(samples.size());
  for (const SimplexPoint& x : samples) ys.push_back(std::log(x[0]) - std::log(x[1]));
  std::sort(ys.begin(), ys.end());

  const double lower = -density_quadrature(p.beta(), p.tau()).half_width;
  const double n = double(ys.size());
  double cdf = ys.front() > lower ? integrate_interval(density_y, lower, ys.front(), 256)
                                  : 0.0;
  double d = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (i > 0 && ys[i] > ys[i - 1]) cdf += integrate_interval(density_y, ys[i - 1], ys[i], 8);
    d = std::max({d, double(i + 1) / n - cdf, cdf - double(i) / n});
  }
  return d;
}

const char* library_version() noexcept { return CONCRETE_GEOM_VERSION; }

std::string VerifyReport::to_json() const {
  JsonWriter w;
  w.begin_object().key("checks").begin_array();
  for (const Check& c : checks) {
    w.begin_object()
        .key("name").value(c.name)
        .key("target").value(c.target)
        .key("estimate").value(c.estimate)
        .key("se_or_tol").value(c.se_or_tol)
        .key("pass").value(c.pass)
        .end_object();
  }
  w.end_array().key("seed").value(seed).key("version").value(version).end_object();
  return w.str();
}

namespace {

using Task = std::function<std::vector<Check>(RngState&)>;

std::vector<Check> prefixed(const std::string& prefix, std::vector<Check> checks) {
  for (Check& c : checks) c.name = prefix + " " + c.name;
  return checks;
}

PositiveWeights sequence_weights(std::size_t k) {
  std::vector<double> b(k);
  for (std::size_t i = 0; i < k; ++i) b[i] = double(i + 1);
  return PositiveWeights(std::move(b));
}

ConcreteParams random_params(std::size_t k, RngState& rng) {
  std::vector<double> b(k);
  for (double& bi : b) bi = std::exp(2.0 * rng.uniform() - 1.0);
  const double tau = std::exp(std::log(0.3) + rng.uniform() * std::log(10.0));
  return ConcreteParams(PositiveWeights(std::move(b)), tau);
}

std::vector<Task> build_tasks(const VerifyOptions& o) {
  const std::size_t k = o.k;
  const std::size_t n = o.mc_samples;
  const PositiveWeights seq = sequence_weights(k);
  const PositiveWeights ones = PositiveWeights::ones(k);
  std::vector<Task> tasks;

  // Normalization of the density.
  tasks.push_back([=](RngState& rng) {
    std::vector<Check> out;
    for (const PositiveWeights& b : {ones, seq}) {
      for (double tau : {0.5, 1.0, 2.0, 5.0}) {
        const ConcreteParams p(b, tau);
        const auto f = [&](const SimplexPoint& x) {
          return std::exp(concrete_log_density(p, x));
        };
        if (k <= 3) {
          const double v = integrate_simplex(f, k, density_quadrature(b, tau, o.quadrature));
          out.push_back(tol_check("normalization " + describe(p), 1.0, v,
                                  k == 2 ? 1e-6 : 1e-4));
        } else if (tau >= 1.0) {
          const McIntegral v = integrate_simplex_mc(f, k, n, rng);
          out.push_back(se_check("normalization " + describe(p), 1.0, v.value,
                                 v.standard_error));
        }
      }
    }
    if (k <= 3) {
      std::vector<double> a(k, 0.5);
      a[0] = 2.0;
      a[1] = 3.0;
      const InverseSchlomilchParams p(PositiveWeights(a), seq, 1.5);
      const double v = integrate_simplex(
          [&](const SimplexPoint& x) { return std::exp(is_log_density(p, x)); }, k,
          density_quadrature(seq, 1.5, o.quadrature));
      out.push_back(tol_check("normalization " + describe(p), 1.0, v,
                              k == 2 ? 1e-6 : 1e-4));
    }
    return out;
  });

  // Gumbel draws.
  tasks.push_back([=](RngState& rng) {
    const std::size_t draws = 10 * n;
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t s = 0; s < draws; ++s) {
      const double g = sample_standard_gumbel(rng);
      const double d = g - mean;
      mean += d / double(s + 1);
      m2 += d * (g - mean);
    }
    const double var = m2 / double(draws - 1);
    const double sigma2 = special::SpecialConstants::pi_sq_over_6;
    // Excess kurtosis of the Gumbel law is 12/5.
    return std::vector<Check>{
        se_check("gumbel_mean", std::numbers::egamma, mean,
                 std::sqrt(sigma2 / double(draws))),
        se_check("gumbel_variance", sigma2, var,
                 sigma2 * std::sqrt((2.0 + 2.4) / double(draws)))};
  });

  // Rounding probabilities: determinant route and argmax frequencies.
  tasks.push_back([=](RngState& rng) {
    std::vector<Check> out;
    const RoundingProbabilities rp = rounding_probabilities(seq);
    for (std::size_t i = 0; i < k; ++i) {
      out.push_back(tol_check(fmt("rounding_volume_ratio[%zu]", i + 1),
                              rp.probabilities[i], rp.volume_ratios[i], 1e-12));
    }
    for (double tau : {0.3, 0.7, 2.0}) {
      const ConcreteParams p(seq, tau);
      std::vector<double> counts(k, 0.0);
      for (const SimplexPoint& x : sample_concrete(p, rng, n)) {
        counts[round_to_vertex(x)] += 1.0;
      }
      for (std::size_t i = 0; i < k; ++i) {
        const double pi = rp.probabilities[i];
        out.push_back(se_check(fmt("argmax_frequency[tau=%g,%zu]", tau, i + 1), pi,
                               counts[i] / double(n),
                               std::sqrt(pi * (1.0 - pi) / double(n))));
      }
    }
    return out;
  });

  // Log-ratio moments for Concrete and inverse Schlomilch laws.
  {
    std::vector<double> a1(k, 1.0);
    a1[0] = 2.0;
    std::vector<double> a2(k, 1.0);
    a2[0] = 2.0;
    a2[1] = 3.0;
    const std::vector<InverseSchlomilchParams> cases = {
        InverseSchlomilchParams(ones, seq, 2.0),
        InverseSchlomilchParams(PositiveWeights(a1), ones, 1.0),
        InverseSchlomilchParams(PositiveWeights(a2), seq, 1.5),
    };
    for (const InverseSchlomilchParams& p : cases) {
      tasks.push_back([=](RngState& rng) {
        const LogRatioMomentReport r = mc_log_ratio_moments(p, n, rng);
        std::vector<Check> out = r.means;
        out.insert(out.end(), r.covariances.begin(), r.covariances.end());
        return prefixed(describe(p), std::move(out));
      });
    }
  }

  // Sufficient statistic mean equals the gradient of log J at alpha = 1.
  tasks.push_back([=](RngState& rng) {
    const ConcreteParams p(seq, 1.5);
    const std::vector<double> target =
        log_norm_const_gradient(InverseSchlomilchParams::concrete(p));
    std::vector<std::vector<double>> t(k, std::vector<double>(n));
    const auto pts = sample_concrete(p, rng, n);
    for (std::size_t s = 0; s < n; ++s) {
      const auto ts = sufficient_statistic(p, pts[s]);
      for (std::size_t i = 0; i < k; ++i) t[i][s] = ts[i];
    }
    const std::vector<double> w(n, 1.0 / double(n));
    std::vector<Check> out;
    for (std::size_t i = 0; i < k; ++i) {
      const Estimate e = weighted_mean(w, t[i]);
      out.push_back(se_check(fmt("sufficient_statistic_mean[%zu]", i + 1), target[i],
                             e.value, e.se));
    }
    return prefixed(describe(p), std::move(out));
  });

  // Special-case moments feeding the Fisher computation.
  tasks.push_back([=](RngState& rng) {
    std::vector<Check> out = mc_special_moments(seq, 1.0, n, rng, k > 3);
    out.push_back(tol_check("special_moment_identity", 0.0,
                            special_moment_identity_error(seq, 1.0), 1e-12));
    return prefixed(describe(ConcreteParams(seq, 1.0)), std::move(out));
  });

  // Fisher information: closed form, quadrature, score Monte Carlo.
  tasks.push_back([=](RngState&) {
    std::vector<Check> out;
    const ConcreteParams p(seq, 1.3);
    const FisherFull full = fisher_full(p);
    Eigen::VectorXd null_dir = Eigen::VectorXd::Zero(Index(k + 1));
    for (std::size_t i = 0; i < k; ++i) null_dir(Index(i)) = seq[i];
    const Eigen::VectorXd image = full.matrix() * null_dir;
    for (Index a = 0; a < image.size(); ++a) {
      out.push_back(tol_check(fmt("fisher_null_vector[%td]", a + 1), 0.0, image(a), 1e-10));
    }
    const Eigen::MatrixXd pushed = reduce_fisher(fisher_full(p.canonical()).matrix());
    const Eigen::MatrixXd closed = fisher_reduced(p).matrix();
    const double scale = std::max(1.0, closed.cwiseAbs().maxCoeff());
    out.push_back(tol_check("fisher_reduction_consistency", 0.0,
                            (pushed - closed).cwiseAbs().maxCoeff(), 1e-12 * scale));
    const double min_eig =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(closed).eigenvalues().minCoeff();
    out.push_back({"fisher_reduced_min_eigenvalue", 0.0, min_eig, 0.0, min_eig > 0.0});
    return prefixed(describe(p), std::move(out));
  });

  if (k == 2) {
    for (const ConcreteParams& p :
         {ConcreteParams(PositiveWeights({0.5, 0.5}), 1.0),
          ConcreteParams(PositiveWeights({0.7, 0.3}), 2.0)}) {
      tasks.push_back([=](RngState&) {
        const QuadFisherResult q = quad_fisher(p, o.quadrature);
        const Eigen::MatrixXd closed = fisher_reduced(p).matrix();
        std::vector<Check> out;
        for (Index a = 0; a < 2; ++a) {
          for (Index b = a; b < 2; ++b) {
            out.push_back(tol_check(fmt("quad_fisher[%td,%td]", a + 1, b + 1),
                                    closed(a, b), q.reduced(a, b), 1e-6));
          }
        }
        return prefixed(describe(p), std::move(out));
      });
    }
  }

  tasks.push_back([=](RngState& rng) {
    const ConcreteParams p = ConcreteParams(seq, 1.0).canonical();
    return prefixed(describe(p), mc_score_fisher(p, n, o.fd_step, rng).checks);
  });

  // Hyperbolic structure.
  tasks.push_back([=](RngState& rng) {
    std::vector<Check> out;
    for (std::size_t t = 0; t < o.pullback_points; ++t) {
      const ConcreteParams p = random_params(k, rng);
      const PullbackResult r = pullback_metric_check(p, o.fd_step);
      out.push_back(tol_check("pullback " + describe(p), 0.0, r.max_deviation, 1e-4));
    }
    return out;
  });

  // Distances.
  tasks.push_back([=](RngState& rng) {
    std::vector<Check> out;
    double half_space = 0.0;
    double etanorm = 0.0;
    double equal_t = 0.0;
    double asym = 0.0;
    double triangle_slack = 0.0;
    double identity = 0.0;
    for (int t = 0; t < 100; ++t) {
      const ConcreteParams a = random_params(k, rng);
      const ConcreteParams b = random_params(k, rng);
      const ConcreteParams c = random_params(k, rng);
      const double dab = fr_distance(a, b).value;
      const double dba = fr_distance(b, a).value;
      const double dbc = fr_distance(b, c).value;
      const double dac = fr_distance(a, c).value;
      const PoincarePoint pa = to_poincare(a);
      const PoincarePoint pb = to_poincare(b);
      half_space = std::max(half_space,
                            std::abs(dab - pa.ell * unit_half_space_distance(pa, pb)));
      // |eta - eta'|^2 in closed form.
      const auto delta = fr_distance(a, b).delta;
      double spread = 0.0;
      for (double di : delta) {
        for (double dj : delta) spread += (di - dj) * (di - dj);
      }
      const double closed =
          std::pow(1.0 / a.tau() - 1.0 / b.tau(), 2) +
          spread / (2.0 * (double(k) + 1.0) * pa.ell * pa.ell * a.tau() * b.tau());
      etanorm = std::max(etanorm, std::abs(poincare_squared_separation(pa, pb) - closed) /
                                      (1.0 + closed));
      const ConcreteParams b_same_t(b.beta(), a.tau());
      equal_t = std::max(equal_t, std::abs(fr_distance(a, b_same_t).value -
                                           fr_distance_equal_temperature(a.beta(), b.beta())));
      asym = std::max(asym, std::abs(dab - dba));
      triangle_slack = std::min(triangle_slack, dab + dbc - dac);
      identity = std::max(identity, fr_distance(a, a).value);
    }
    out.push_back(tol_check("distance_half_space_equivalence", 0.0, half_space, 1e-10));
    out.push_back(tol_check("distance_eta_norm", 0.0, etanorm, 1e-12));
    out.push_back(tol_check("distance_equal_temperature", 0.0, equal_t, 1e-12));
    out.push_back(tol_check("distance_symmetry", 0.0, asym, 1e-12));
    out.push_back({"distance_triangle_inequality", 0.0, triangle_slack, 1e-12,
                   triangle_slack >= -1e-12});
    out.push_back(tol_check("distance_identity", 0.0, identity, 0.0));
    if (k == 2) {
      const ConcreteParams p(PositiveWeights({1.0, 1.0}), 1.0);
      const ConcreteParams q(PositiveWeights({1.0, 1.0}), 4.0);
      out.push_back(tol_check("distance_worked_value",
                              2.0 * curvature_length(2) * std::numbers::ln2,
                              fr_distance(p, q).value, 1e-9));
    }
    return out;
  });

  // Transform laws.
  tasks.push_back([=](RngState& rng) {
    std::vector<Check> out;
    const ConcreteParams p(seq, 0.8);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const SimplexPoint x = sample_uniform_simplex(k, rng);
      const SimplexPoint back = uniform_transform(
          p, uniform_transform(p, x, TransformDirection::ToUniform),
          TransformDirection::FromUniform);
      for (std::size_t i = 0; i < k; ++i) worst = std::max(worst, std::abs(back[i] - x[i]));
    }
    out.push_back(tol_check("uniform_transform_round_trip", 0.0, worst, 1e-10));

    const auto samples = sample_concrete(p, rng, n);
    std::vector<double> first;
    first.reserve(n);
    for (const SimplexPoint& x : samples) {
      first.push_back(uniform_transform(p, x, TransformDirection::ToUniform)[0]);
    }
    // Y_1 ~ Beta(1, K - 1) under the uniform law on S_K.
    const double km1 = double(k - 1);
    const double crit = ks_critical_value_1pct(n);
    const double d_uniform =
        ks_statistic(first, [km1](double t) { return 1.0 - std::pow(1.0 - t, km1); });
    out.push_back({"ks_uniform_transform " + describe(p), 0.0, d_uniform, crit,
                   d_uniform < crit});
    if (k == 2) {
      const double d_sampler = ks_concrete_marginal(p, samples);
      out.push_back({"ks_sampler " + describe(p), 0.0, d_sampler, crit, d_sampler < crit});
    }
    return out;
  });

  return tasks;
}

}  // namespace

VerifyReport run_verification_suite(const VerifyOptions& options) {
  if (options.k < 2) fail(ErrorCode::DomainError, "verify: K must be at least 2");
  if (options.mc_samples < 10'000) {
    fail(ErrorCode::InvalidArgument, "verify: mc_samples must be >= 10^4");
  }
  const std::vector<Task> tasks = build_tasks(options);
  const RngState root(options.seed);
  std::vector<std::vector<Check>> results(tasks.size());

  const unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      RngState rng = root.derive(t);
      results[t] = tasks[t](rng);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> workers;
    for (unsigned w = 0; w < jobs; ++w) {
      workers.push_back(std::async(std::launch::async, [&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++) {
          RngState rng = root.derive(t);
          results[t] = tasks[t](rng);
        }
      }));
    }
    for (auto& w : workers) w.get();
  }

  VerifyReport report;
  report.seed = options.seed;
  report.version = library_version();
  for (auto& r : results) {
    report.checks.insert(report.checks.end(), std::make_move_iterator(r.begin()),
                         std::make_move_iterator(r.end()));
  }
  return report;
}

}  // namespace concrete
