// Command-line front end over the concrete_geom C API.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "concrete_geom/concrete_geom.h"
#include "concrete_geom/json_writer.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitDomain = 3;

struct CommandError {
  int exit_code;
  std::string message;
};

void check(cg_status s) {
  if (s != CG_OK) {
    throw CommandError{kExitDomain, std::string(cg_status_string(s)) + ": " +
                                        cg_last_error_message()};
  }
}

class Params {
 public:
  Params(const std::vector<double>& beta, double tau,
         const std::optional<std::vector<double>>& alpha = std::nullopt) {
    if (alpha) {
      if (alpha->size() != beta.size()) {
        throw CommandError{kExitDomain, "dim mismatch: --alpha and --beta differ in length"};
      }
      check(cg_params_create_is(alpha->data(), beta.data(), beta.size(), tau, &p_));
    } else {
      check(cg_params_create(beta.data(), beta.size(), tau, &p_));
    }
  }
  Params(const Params&) = delete;
  Params& operator=(const Params&) = delete;
  ~Params() { cg_params_destroy(p_); }
  const cg_params* get() const { return p_; }
  std::size_t dim() const { return cg_params_dim(p_); }

 private:
  cg_params* p_ = nullptr;
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) { check(cg_rng_create(seed, &r_)); }
  Rng(const Rng&) = delete;
  Rng& operator=(const Rng&) = delete;
  ~Rng() { cg_rng_destroy(r_); }
  cg_rng* get() { return r_; }

 private:
  cg_rng* r_ = nullptr;
};

using Config = std::map<std::string, std::string>;

Config load_config() {
  Config cfg;
  const char* path = std::getenv("CONCRETE_GEOM_CONFIG");
  if (!path || !*path) return cfg;
  std::ifstream in(path);
  if (!in) throw CommandError{kExitUsage, std::string("cannot read config file ") + path};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CommandError{kExitUsage, std::string(path) + ":" + std::to_string(lineno) +
                                         ": expected key=value"};
    }
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    cfg[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  static const char* known[] = {"mc_samples", "nodes_k2", "nodes_k3",
                                "pullback_points", "fd_step", "round_samples"};
  for (const auto& [key, value] : cfg) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw CommandError{kExitUsage, "unknown config key: " + key};
    }
  }
  return cfg;
}

template <class T>
void apply_config(const Config& cfg, const std::string& key, T& target) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return;
  std::istringstream in(it->second);
  T value{};
  if (!(in >> value) || !(in >> std::ws).eof()) {
    throw CommandError{kExitUsage, "bad config value for " + key + ": " + it->second};
  }
  target = value;
}

std::string fmt(double v) { return concrete::format_double(v); }

void print_csv_row(const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) std::cout << ',';
    std::cout << fmt(row[i]);
  }
  std::cout << '\n';
}

void print_csv_header(const std::string& stem, std::size_t n, const char* extra = nullptr) {
  for (std::size_t i = 0; i < n; ++i) std::cout << (i ? "," : "") << stem << i + 1;
  if (extra) std::cout << ',' << extra;
  std::cout << '\n';
}

void print_matrix_csv(const std::vector<double>& m, std::size_t n) {
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      std::cout << (r || c ? "," : "") << "m_" << r + 1 << '_' << c + 1;
    }
  }
  std::cout << '\n';
  print_csv_row(m);
}

void json_matrix(concrete::JsonWriter& w, const std::vector<double>& m, std::size_t n) {
  w.begin_array();
  for (std::size_t r = 0; r < n; ++r) w.array({m.data() + r * n, n});
  w.end_array();
}

struct Common {
  std::vector<double> beta;
  double tau = 1.0;
  std::string format = "json";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--beta", c.beta, "Category weights, comma separated")
      ->required()
      ->delimiter(',');
  cmd->add_option("--tau", c.tau, "Temperature")->required();
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
}

int run_sample(const Common& c, std::size_t n, std::uint64_t seed) {
  Params p(c.beta, c.tau);
  Rng rng(seed);
  const std::size_t k = p.dim();
  std::vector<double> out(n * k);
  check(cg_sample(p.get(), rng.get(), n, out.data()));
  if (c.format == "csv") {
    print_csv_header("x", k);
    for (std::size_t s = 0; s < n; ++s) print_csv_row({out.begin() + s * k, out.begin() + (s + 1) * k});
  } else {
    concrete::JsonWriter w;
    w.begin_object().key("samples").begin_array();
    for (std::size_t s = 0; s < n; ++s) w.array({out.data() + s * k, k});
    w.end_array().key("seed").value(seed).end_object();
    std::cout << w.str() << '\n';
  }
  return kExitOk;
}

int run_pdf(const Common& c, const std::optional<std::vector<double>>& alpha,
            const std::vector<double>& x) {
  Params p(c.beta, c.tau, alpha);
  double ld = 0.0;
  check(cg_log_density(p.get(), x.data(), x.size(), &ld));
  if (c.format == "csv") {
    std::cout << "log_density,density\n";
    print_csv_row({ld, std::exp(ld)});
  } else {
    concrete::JsonWriter w;
    w.begin_object().key("log_density").value(ld).key("density").value(std::exp(ld)).end_object();
    std::cout << w.str() << '\n';
  }
  return kExitOk;
}

int run_moments(const Common& c, const std::optional<std::vector<double>>& alpha) {
  Params p(c.beta, c.tau, alpha);
  const std::size_t k = p.dim();
  std::vector<double> mean(k * k);
  std::vector<double> var(k * k);
  std::vector<double> cov(k * k * k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      check(cg_lr_mean(p.get(), i, j, &mean[i * k + j]));
      check(cg_lr_var(p.get(), i, j, &var[i * k + j]));
    }
  }
  // Row index (i, k), column index (j, l).
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t kk = 0; kk < k; ++kk)
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t l = 0; l < k; ++l)
          check(cg_lr_cov(p.get(), i, kk, j, l, &cov[((i * k + kk) * k + j) * k + l]));

  if (c.format == "csv") {
    std::cout << "quantity,i,k,j,l,value\n";
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        std::cout << "mean," << i + 1 << ',' << j + 1 << ",,," << fmt(mean[i * k + j]) << '\n';
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        std::cout << "var," << i + 1 << ',' << j + 1 << ",,," << fmt(var[i * k + j]) << '\n';
      }
    }
    for (std::size_t r = 0; r < k * k; ++r) {
      for (std::size_t s = 0; s < k * k; ++s) {
        std::cout << "cov," << r / k + 1 << ',' << r % k + 1 << ',' << s / k + 1 << ','
                  << s % k + 1 << ',' << fmt(cov[r * k * k + s]) << '\n';
      }
    }
  } else {
    concrete::JsonWriter w;
    w.begin_object().key("means");
    json_matrix(w, mean, k);
    w.key("variances");
    json_matrix(w, var, k);
    w.key("covariances");
    json_matrix(w, cov, k * k);
    w.end_object();
    std::cout << w.str() << '\n';
  }
  return kExitOk;
}

int run_fisher(const Common& c, bool full) {
  Params p(c.beta, c.tau);
  const std::size_t n = full ? p.dim() + 1 : p.dim();
  std::vector<double> m(n * n);
  check(cg_fisher(p.get(), full ? 1 : 0, m.data()));
  if (c.format == "csv") {
    print_matrix_csv(m, n);
  } else {
    concrete::JsonWriter w;
    w.begin_object().key("full").value(full).key("matrix");
    json_matrix(w, m, n);
    w.end_object();
    std::cout << w.str() << '\n';
  }
  return kExitOk;
}

int run_poincare(const Common& c, const std::vector<double>& eta, bool inverse) {
  if (inverse) {
    const std::size_t k = eta.size();
    std::vector<double> beta(k);
    double tau = 0.0;
    check(cg_from_poincare(eta.data(), k, beta.data(), &tau));
    if (c.format == "csv") {
      print_csv_header("beta", k, "tau");
      beta.push_back(tau);
      print_csv_row(beta);
    } else {
      concrete::JsonWriter w;
      w.begin_object().key("beta").array(beta).key("tau").value(tau).end_object();
      std::cout << w.str() << '\n';
    }
    return kExitOk;
  }
  Params p(c.beta, c.tau);
  const std::size_t k = p.dim();
  std::vector<double> out(k);
  double ell = 0.0;
  check(cg_to_poincare(p.get(), out.data(), &ell));
  if (c.format == "csv") {
    print_csv_header("eta", k, "ell");
    std::vector<double> row = out;
    row.push_back(ell);
    print_csv_row(row);
  } else {
    concrete::JsonWriter w;
    w.begin_object().key("eta").array(out).key("ell").value(ell).end_object();
    std::cout << w.str() << '\n';
  }
  return kExitOk;
}

int run_distance(const std::vector<double>& ba, double ta, const std::vector<double>& bb,
                 double tb, const std::string& format) {
  Params a(ba, ta);
  Params b(bb, tb);
  if (a.dim() != b.dim()) {
    throw CommandError{kExitDomain, "dim mismatch: --beta-a and --beta-b differ in length"};
  }
  double d = 0.0;
  double ell = 0.0;
  check(cg_fr_distance(a.get(), b.get(), &d));
  check(cg_curvature_length(a.dim(), &ell));
  if (format == "csv") {
    std::cout << "distance,ell\n";
    print_csv_row({d, ell});
  } else {
    concrete::JsonWriter w;
    w.begin_object().key("distance").value(d).key("ell").value(ell).end_object();
    std::cout << w.str() << '\n';
  }
  return kExitOk;
}

int run_round(const Common& c, std::size_t n, std::uint64_t seed) {
  Params p(c.beta, c.tau);
  Rng rng(seed);
  const std::size_t k = p.dim();
  std::vector<double> prob(k);
  std::vector<double> vol(k);
  std::vector<double> freq(k);
  check(cg_rounding_probabilities(c.beta.data(), k, prob.data(), vol.data()));
  check(cg_round_frequencies(p.get(), rng.get(), n, freq.data()));
  std::vector<double> se(k);
  bool pass = true;
  for (std::size_t i = 0; i < k; ++i) {
    se[i] = std::sqrt(prob[i] * (1.0 - prob[i]) / double(n));
    pass = pass && std::abs(freq[i] - prob[i]) <= 4.0 * se[i] + 1e-12;
  }
  if (c.format == "csv") {
    std::cout << "category,probability,volume_ratio,frequency,standard_error\n";
    for (std::size_t i = 0; i < k; ++i) {
      std::cout << i + 1 << ',' << fmt(prob[i]) << ',' << fmt(vol[i]) << ',' << fmt(freq[i])
                << ',' << fmt(se[i]) << '\n';
    }
  } else {
    concrete::JsonWriter w;
    w.begin_object()
        .key("probabilities").array(prob)
        .key("volume_ratios").array(vol)
        .key("frequencies").array(freq)
        .key("standard_errors").array(se)
        .key("samples").value(std::uint64_t(n))
        .key("seed").value(seed)
        .key("pass").value(pass)
        .end_object();
    std::cout << w.str() << '\n';
  }
  return pass ? kExitOk : kExitVerifyFailed;
}

int run_verify(const cg_verify_options& o, const std::string& format) {
  char* json = nullptr;
  int passed = 0;
  check(cg_verify(&o, &json, &passed));
  const std::string report(json);
  cg_string_free(json);
  if (format == "csv") {
    // Re-emit the report rows; the JSON is the canonical form.
    std::cout << "name,target,estimate,se_or_tol,pass\n";
    std::size_t pos = 0;
    const auto field = [&](const std::string& key, std::size_t from) {
      const std::size_t at = report.find("\"" + key + "\":", from) + key.size() + 3;
      const std::size_t end = report.find_first_of(",}", at);
      return std::make_pair(report.substr(at, end - at), end);
    };
    while ((pos = report.find("{\"name\":", pos)) != std::string::npos) {
      const auto [name, a] = field("name", pos);
      const auto [target, b] = field("target", a);
      const auto [estimate, c] = field("estimate", b);
      const auto [tol, d] = field("se_or_tol", c);
      const auto [pass, e] = field("pass", d);
      std::cout << name << ',' << target << ',' << estimate << ',' << tol << ',' << pass << '\n';
      pos = e;
    }
  } else {
    std::cout << report << '\n';
  }
  return passed ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concrete distribution sampling, moments and Fisher-Rao geometry"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cg_version()));

  Common common;
  std::size_t n = 1;
  std::uint64_t seed = 0;
  std::vector<double> alpha;
  std::vector<double> x;
  std::vector<double> eta;
  bool full = false;
  bool inverse = false;

  auto* sample = app.add_subcommand("sample", "Draw Concrete samples");
  add_common(sample, common);
  sample->add_option("-n", n, "Number of samples")->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "Random seed");

  auto* pdf = app.add_subcommand("pdf", "Log-density of a Concrete or IS law at a point");
  add_common(pdf, common);
  auto* alpha_opt = pdf->add_option("--alpha", alpha, "IS shape parameters")->delimiter(',');
  pdf->add_option("--x", x, "Point on the simplex")->required()->delimiter(',');

  auto* moments = app.add_subcommand("moments", "Log-ratio means, variances, covariances");
  add_common(moments, common);
  auto* alpha_opt_m =
      moments->add_option("--alpha", alpha, "IS shape parameters")->delimiter(',');

  auto* fisher = app.add_subcommand("fisher", "Fisher information matrix");
  add_common(fisher, common);
  fisher->add_flag("--full", full, "Degenerate (K+1) matrix in (beta, tau)");

  auto* poincare = app.add_subcommand("poincare", "Poincare half-space coordinates");
  poincare->add_option("--beta", common.beta, "Category weights")->delimiter(',');
  poincare->add_option("--tau", common.tau, "Temperature");
  poincare->add_option("--eta", eta, "Half-space point (eta_1..eta_K)")->delimiter(',');
  poincare->add_flag("--inverse", inverse, "Map a half-space point back to (beta, tau)");
  poincare->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));

  std::vector<double> beta_a;
  std::vector<double> beta_b;
  double tau_a = 1.0;
  double tau_b = 1.0;
  auto* distance = app.add_subcommand("distance", "Fisher-Rao distance");
  distance->add_option("--beta-a", beta_a)->required()->delimiter(',');
  distance->add_option("--tau-a", tau_a)->required();
  distance->add_option("--beta-b", beta_b)->required()->delimiter(',');
  distance->add_option("--tau-b", tau_b)->required();
  distance->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));

  std::size_t round_n = 100'000;
  auto* round = app.add_subcommand("round", "Rounding probabilities with a Monte Carlo check");
  add_common(round, common);
  auto* round_n_opt = round->add_option("-n", round_n, "Samples")->check(CLI::PositiveNumber);
  round->add_option("--seed", seed, "Random seed");

  cg_verify_options vopt;
  cg_verify_options_default(&vopt);
  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  verify->add_option("--k", vopt.k, "Number of categories")->check(CLI::Range(2, 64));
  verify->add_option("--seed", vopt.seed, "Random seed");
  verify->add_option("--jobs", vopt.jobs, "Worker threads")->check(CLI::Range(1, 256));
  auto* mc_opt = verify->add_option("--mc-samples", vopt.mc_samples, "Monte Carlo draws");
  verify->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    const Config cfg = load_config();
    if (*sample) return run_sample(common, n, seed);
    if (*pdf) {
      return run_pdf(common, alpha_opt->count() ? std::optional(alpha) : std::nullopt, x);
    }
    if (*moments) {
      return run_moments(common, alpha_opt_m->count() ? std::optional(alpha) : std::nullopt);
    }
    if (*fisher) return run_fisher(common, full);
    if (*poincare) {
      if (inverse ? eta.empty() : common.beta.empty()) {
        throw CommandError{kExitUsage, inverse ? "poincare --inverse needs --eta"
                                               : "poincare needs --beta and --tau"};
      }
      return run_poincare(common, eta, inverse);
    }
    if (*distance) return run_distance(beta_a, tau_a, beta_b, tau_b, common.format);
    if (*round) {
      if (!round_n_opt->count()) apply_config(cfg, "round_samples", round_n);
      return run_round(common, round_n, seed);
    }
    if (*verify) {
      if (!mc_opt->count()) apply_config(cfg, "mc_samples", vopt.mc_samples);
      apply_config(cfg, "nodes_k2", vopt.nodes_k2);
      apply_config(cfg, "nodes_k3", vopt.nodes_k3);
      apply_config(cfg, "pullback_points", vopt.pullback_points);
      apply_config(cfg, "fd_step", vopt.fd_step);
      return run_verify(vopt, common.format);
    }
  } catch (const CommandError& e) {
    std::cerr << "error: " << e.message << '\n';
    if (e.exit_code == kExitUsage) std::cerr << app.help();
    return e.exit_code;
  }
  return kExitUsage;
}
