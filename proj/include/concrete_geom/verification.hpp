#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "concrete_geom/distributions.hpp"
#include "concrete_geom/quadrature.hpp"
#include "concrete_geom/rng.hpp"

namespace concrete {

/// Width of the Monte Carlo acceptance band in standard errors.
inline constexpr double kSeBand = 4.0;

/// One oracle comparison. For Monte Carlo checks se_or_tol is the standard
/// error and the band is kSeBand * se; otherwise it is an absolute tolerance.
struct Check {
  std::string name;
  double target;
  double estimate;
  double se_or_tol;
  bool pass;
};

/// |estimate - target| <= 4 se, with a 1e-12 floor for exactly-zero SE.
Check se_check(std::string name, double target, double estimate, double se);

/// |estimate - target| <= tol.
Check tol_check(std::string name, double target, double estimate, double tol);

bool all_pass(const std::vector<Check>& checks);

struct LogRatioMomentReport {
  /// One per pair i < k, targets from lr_mean.
  std::vector<Check> means;
  /// One per pair of pairs (i<k) <= (j<l), targets from lr_cov; the diagonal
  /// entries are additionally compared with lr_var.
  std::vector<Check> covariances;
  double effective_sample_size;
  bool all_pass() const;
};

/// Self-normalized importance-sampling estimates of every pairwise log-ratio
/// mean and covariance under IS(alpha, beta, tau), drawn from the
/// C(beta, tau min(1, min alpha)) proposal with weights g/h. Requires n >= 1000; throws DegenerateWeights if
/// the effective sample size falls below n/100.
LogRatioMomentReport mc_log_ratio_moments(const InverseSchlomilchParams& p,
                                          std::size_t n, RngState& rng);
LogRatioMomentReport mc_log_ratio_moments(const ConcreteParams& p, std::size_t n,
                                          RngState& rng);

/// Importance-sampled checks of the 1 + e_m + e_n moments against
/// special_lr_mean and raw_second_moment_special. With symmetric_only the
/// tuples are restricted to m <= n and k <= l (both formulas are symmetric
/// in those pairs).
std::vector<Check> mc_special_moments(const PositiveWeights& beta, double tau,
                                      std::size_t n, RngState& rng,
                                      bool symmetric_only = false);

/// Largest |raw - (cov + mean mean)| over all index tuples, using the
/// general lr_cov / lr_mean at alpha = 1 + e_m + e_n.
double special_moment_identity_error(const PositiveWeights& beta, double tau);

struct ScoreFisherReport {
  Eigen::MatrixXd estimate;
  Eigen::MatrixXd standard_error;
  Eigen::MatrixXd target;
  Eigen::VectorXd score_mean;
  Eigen::VectorXd score_mean_se;
  std::vector<Check> checks;
};

/// Average outer product of central-difference scores in the reduced
/// coordinates (beta_1..beta_{K-1}, tau), canonical gauge, step h relative.
/// Requires n >= 10^4.
ScoreFisherReport mc_score_fisher(const ConcreteParams& p, std::size_t n,
                                  double h, RngState& rng);

/// Hessian of log J_0 in (beta_1..beta_K, tau).
Eigen::MatrixXd log_norm_hessian(const ConcreteParams& p);

struct QuadFisherResult {
  Eigen::MatrixXd log_norm_term;  // (K+1)x(K+1)
  Eigen::MatrixXd h_term;         // E_f[d^2 log h]
  Eigen::MatrixXd full;           // log_norm_term - h_term
  Eigen::MatrixXd reduced;        // full pushed to K x K
};

/// Fisher information assembled from the log J_0 Hessian and quadrature of
/// h d^2 log h. K = 2 only (UnsupportedDim otherwise).
QuadFisherResult quad_fisher(const ConcreteParams& p,
                             const QuadratureConfig& base = {});

struct PullbackResult {
  Eigen::MatrixXd pulled;  // J^T I J with J = d(theta)/d(eta)
  double scale;            // ell^2 / eta_K^2
  double max_deviation;    // max |pulled - scale * Identity|
};

/// Pulls the reduced Fisher matrix back to Poincare half-space coordinates
/// through the central-difference Jacobian of the coordinate map.
PullbackResult pullback_metric_check(const ConcreteParams& p, double h);

/// Kolmogorov-Smirnov statistic of the samples against a continuous CDF.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

/// Asymptotic one-sample KS critical value at the 1% level.
double ks_critical_value_1pct(std::size_t n);

/// KS statistic of X_1 samples (K = 2) against the CDF obtained by
/// integrating the Concrete density numerically.
double ks_concrete_marginal(const ConcreteParams& p,
                            const std::vector<SimplexPoint>& samples);

struct VerifyOptions {
  std::size_t k = 2;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::size_t mc_samples = 100'000;
  std::size_t pullback_points = 20;
  double fd_step = 1e-5;
  QuadratureConfig quadrature;
};

struct VerifyReport {
  std::vector<Check> checks;
  std::uint64_t seed = 0;
  std::string version;

  bool all_pass() const { return concrete::all_pass(checks); }
  /// {"checks":[{"name","target","estimate","se_or_tol","pass"}],"seed","version"}
  std::string to_json() const;
};

/// Runs every oracle for K categories. Checks are grouped into tasks with
/// their own derived random streams, so the report does not depend on jobs.
VerifyReport run_verification_suite(const VerifyOptions& options);

const char* library_version() noexcept;

}  // namespace concrete
