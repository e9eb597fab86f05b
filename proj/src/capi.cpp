#include "concrete_geom/concrete_geom.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "concrete_geom/distributions.hpp"
#include "concrete_geom/error.hpp"
#include "concrete_geom/info_geometry.hpp"
#include "concrete_geom/moments.hpp"
#include "concrete_geom/verification.hpp"

using namespace concrete;

struct cg_params {
  ConcreteParams concrete;
  std::optional<InverseSchlomilchParams> is;

  InverseSchlomilchParams as_is() const {
    return is ? *is : InverseSchlomilchParams::concrete(concrete);
  }
};

struct cg_rng {
  RngState state;
};

namespace {

thread_local std::string last_error;

cg_status map(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return CG_ERR_INVALID_ARGUMENT;
    case ErrorCode::NonPositiveEntry: return CG_ERR_NON_POSITIVE_ENTRY;
    case ErrorCode::DimMismatch: return CG_ERR_DIM_MISMATCH;
    case ErrorCode::BoundaryPoint: return CG_ERR_BOUNDARY_POINT;
    case ErrorCode::DomainError: return CG_ERR_DOMAIN;
    case ErrorCode::NonPositiveTemperature: return CG_ERR_NON_POSITIVE_TEMPERATURE;
    case ErrorCode::IndexOutOfRange: return CG_ERR_INDEX_OUT_OF_RANGE;
    case ErrorCode::UnsupportedDim: return CG_ERR_UNSUPPORTED_DIM;
    case ErrorCode::NonFiniteIntegrand: return CG_ERR_NON_FINITE_INTEGRAND;
    case ErrorCode::NotNormalized: return CG_ERR_NOT_NORMALIZED;
    case ErrorCode::DegenerateWeights: return CG_ERR_DEGENERATE_WEIGHTS;
    case ErrorCode::Internal: return CG_ERR_INTERNAL;
  }
  return CG_ERR_INTERNAL;
}

template <class F>
cg_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return CG_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return map(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CG_ERR_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CG_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return CG_ERR_INTERNAL;
  }
}

cg_status null_pointer(const char* what) {
  last_error = std::string(what) + " is null";
  return CG_ERR_NULL_POINTER;
}

std::vector<double> copy(const double* v, std::size_t k) { return {v, v + k}; }

SimplexPoint point(const double* x, std::size_t k, std::size_t expected) {
  if (k != expected) fail(ErrorCode::DimMismatch, "point dimension does not match parameters");
  return SimplexPoint(copy(x, k));
}

void write(const SimplexPoint& x, double* out) {
  std::copy(x.components().begin(), x.components().end(), out);
}

}  // namespace

#define CG_REQUIRE(ptr)                         \
  do {                                          \
    if ((ptr) == nullptr) return null_pointer(#ptr); \
  } while (0)

extern "C" {

const char* cg_version(void) { return library_version(); }

const char* cg_status_string(cg_status status) {
  switch (status) {
    case CG_OK: return "ok";
    case CG_ERR_NULL_POINTER: return "null pointer";
    case CG_ERR_OUT_OF_MEMORY: return "out of memory";
    case CG_ERR_INVALID_ARGUMENT: return to_string(ErrorCode::InvalidArgument);
    case CG_ERR_NON_POSITIVE_ENTRY: return to_string(ErrorCode::NonPositiveEntry);
    case CG_ERR_DIM_MISMATCH: return to_string(ErrorCode::DimMismatch);
    case CG_ERR_BOUNDARY_POINT: return to_string(ErrorCode::BoundaryPoint);
    case CG_ERR_DOMAIN: return to_string(ErrorCode::DomainError);
    case CG_ERR_NON_POSITIVE_TEMPERATURE: return to_string(ErrorCode::NonPositiveTemperature);
    case CG_ERR_INDEX_OUT_OF_RANGE: return to_string(ErrorCode::IndexOutOfRange);
    case CG_ERR_UNSUPPORTED_DIM: return to_string(ErrorCode::UnsupportedDim);
    case CG_ERR_NON_FINITE_INTEGRAND: return to_string(ErrorCode::NonFiniteIntegrand);
    case CG_ERR_NOT_NORMALIZED: return to_string(ErrorCode::NotNormalized);
    case CG_ERR_DEGENERATE_WEIGHTS: return to_string(ErrorCode::DegenerateWeights);
    case CG_ERR_INTERNAL: return to_string(ErrorCode::Internal);
  }
  return "unknown status";
}

const char* cg_last_error_message(void) { return last_error.c_str(); }

cg_status cg_params_create(const double* beta, size_t k, double tau, cg_params** out) {
  CG_REQUIRE(beta);
  CG_REQUIRE(out);
  return guarded([&] {
    *out = new cg_params{ConcreteParams(PositiveWeights(copy(beta, k)), tau), std::nullopt};
  });
}

cg_status cg_params_create_is(const double* alpha, const double* beta, size_t k,
                              double tau, cg_params** out) {
  CG_REQUIRE(alpha);
  CG_REQUIRE(beta);
  CG_REQUIRE(out);
  return guarded([&] {
    InverseSchlomilchParams is(PositiveWeights(copy(alpha, k)),
                               PositiveWeights(copy(beta, k)), tau);
    *out = new cg_params{is.base(), is};
  });
}

void cg_params_destroy(cg_params* p) { delete p; }

size_t cg_params_dim(const cg_params* p) { return p ? p->concrete.dim() : 0; }

int cg_params_has_alpha(const cg_params* p) { return p && p->is ? 1 : 0; }

cg_status cg_rng_create(uint64_t seed, cg_rng** out) {
  CG_REQUIRE(out);
  return guarded([&] { *out = new cg_rng{RngState(seed)}; });
}

void cg_rng_destroy(cg_rng* rng) { delete rng; }

cg_status cg_sample(const cg_params* p, cg_rng* rng, size_t n, double* out) {
  CG_REQUIRE(p);
  CG_REQUIRE(rng);
  if (n > 0) CG_REQUIRE(out);
  return guarded([&] {
    if (p->is) fail(ErrorCode::InvalidArgument, "sampling supports Concrete parameters only");
    const std::size_t k = p->concrete.dim();
    const auto draws = sample_concrete(p->concrete, rng->state, n);
    for (std::size_t s = 0; s < n; ++s) write(draws[s], out + s * k);
  });
}

cg_status cg_log_density(const cg_params* p, const double* x, size_t k, double* out) {
  CG_REQUIRE(p);
  CG_REQUIRE(x);
  CG_REQUIRE(out);
  return guarded([&] {
    const SimplexPoint pt = point(x, k, p->concrete.dim());
    *out = p->is ? is_log_density(*p->is, pt) : concrete_log_density(p->concrete, pt);
  });
}

cg_status cg_log_norm_const(const cg_params* p, double* out) {
  CG_REQUIRE(p);
  CG_REQUIRE(out);
  return guarded([&] {
    *out = p->is ? log_norm_const(*p->is) : log_norm_const(p->concrete);
  });
}

cg_status cg_lr_mean(const cg_params* p, size_t i, size_t k, double* out) {
  CG_REQUIRE(p);
  CG_REQUIRE(out);
  return guarded([&] { *out = lr_mean(p->as_is(), i, k); });
}

cg_status cg_lr_cov(const cg_params* p, size_t i, size_t k, size_t j, size_t l,
                    double* out) {
  CG_REQUIRE(p);
  CG_REQUIRE(out);
  return guarded([&] { *out = lr_cov(p->as_is(), i, k, j, l); });
}

cg_status cg_lr_var(const cg_params* p, size_t i, size_t k, double* out) {
  CG_REQUIRE(p);
  CG_REQUIRE(out);
  return guarded([&] { *out = lr_var(p->as_is(), i, k); });
}

cg_status cg_fisher(const cg_params* p, int full, double* out) {
  CG_REQUIRE(p);
  CG_REQUIRE(out);
  return guarded([&] {
    const Eigen::MatrixXd m =
        full ? fisher_full(p->concrete).matrix() : fisher_reduced(p->concrete).matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) *out++ = m(r, c);
    }
  });
}

cg_status cg_curvature_length(size_t k, double* out) {
  CG_REQUIRE(out);
  return guarded([&] { *out = curvature_length(k); });
}

cg_status cg_to_poincare(const cg_params* p, double* eta, double* ell) {
  CG_REQUIRE(p);
  CG_REQUIRE(eta);
  return guarded([&] {
    const PoincarePoint q = to_poincare(p->concrete);
    std::copy(q.eta.begin(), q.eta.end(), eta);
    eta[q.eta.size()] = q.eta_k;
    if (ell) *ell = q.ell;
  });
}

cg_status cg_from_poincare(const double* eta, size_t k, double* beta_out,
                           double* tau_out) {
  CG_REQUIRE(eta);
  CG_REQUIRE(beta_out);
  CG_REQUIRE(tau_out);
  return guarded([&] {
    if (k < 2) fail(ErrorCode::DomainError, "from_poincare: K must be at least 2");
    const PoincarePoint q(copy(eta, k - 1), eta[k - 1], curvature_length(k));
    const ConcreteParams c = from_poincare(q);
    std::copy(c.beta().values().begin(), c.beta().values().end(), beta_out);
    *tau_out = c.tau();
  });
}

cg_status cg_fr_distance(const cg_params* a, const cg_params* b, double* out) {
  CG_REQUIRE(a);
  CG_REQUIRE(b);
  CG_REQUIRE(out);
  return guarded([&] { *out = fr_distance(a->concrete, b->concrete).value; });
}

cg_status cg_categorical_distance(const double* b, const double* b_prime, size_t k,
                                  double* out) {
  CG_REQUIRE(b);
  CG_REQUIRE(b_prime);
  CG_REQUIRE(out);
  return guarded([&] {
    *out = categorical_fr_distance(std::span<const double>(b, k),
                                   std::span<const double>(b_prime, k));
  });
}

cg_status cg_uniform_transform(const cg_params* p, const double* x, size_t k,
                               int inverse, double* out) {
  CG_REQUIRE(p);
  CG_REQUIRE(x);
  CG_REQUIRE(out);
  return guarded([&] {
    const SimplexPoint pt = point(x, k, p->concrete.dim());
    write(uniform_transform(p->concrete, pt,
                            inverse ? TransformDirection::FromUniform
                                    : TransformDirection::ToUniform),
          out);
  });
}

cg_status cg_escort_transform(const cg_params* p, const double* x, size_t k, int sign,
                              double* out) {
  CG_REQUIRE(p);
  CG_REQUIRE(x);
  CG_REQUIRE(out);
  return guarded([&] {
    write(escort_transform(p->concrete, point(x, k, p->concrete.dim()), sign), out);
  });
}

cg_status cg_rounding_probabilities(const double* beta, size_t k, double* probabilities,
                                    double* volume_ratios) {
  CG_REQUIRE(beta);
  CG_REQUIRE(probabilities);
  return guarded([&] {
    const RoundingProbabilities r = rounding_probabilities(PositiveWeights(copy(beta, k)));
    std::copy(r.probabilities.begin(), r.probabilities.end(), probabilities);
    if (volume_ratios) {
      std::copy(r.volume_ratios.begin(), r.volume_ratios.end(), volume_ratios);
    }
  });
}

cg_status cg_round_frequencies(const cg_params* p, cg_rng* rng, size_t n,
                               double* frequencies) {
  CG_REQUIRE(p);
  CG_REQUIRE(rng);
  CG_REQUIRE(frequencies);
  return guarded([&] {
    if (n == 0) fail(ErrorCode::InvalidArgument, "round: n must be positive");
    std::vector<double> counts(p->concrete.dim(), 0.0);
    for (const SimplexPoint& x : sample_concrete(p->concrete, rng->state, n)) {
      counts[round_to_vertex(x)] += 1.0;
    }
    for (std::size_t i = 0; i < counts.size(); ++i) frequencies[i] = counts[i] / double(n);
  });
}

void cg_verify_options_default(cg_verify_options* options) {
  if (!options) return;
  const VerifyOptions d;
  options->k = d.k;
  options->seed = d.seed;
  options->jobs = d.jobs;
  options->mc_samples = d.mc_samples;
  options->pullback_points = d.pullback_points;
  options->fd_step = d.fd_step;
  options->nodes_k2 = d.quadrature.nodes_k2;
  options->nodes_k3 = d.quadrature.nodes_k3;
}

cg_status cg_verify(const cg_verify_options* options, char** json_out, int* all_passed) {
  CG_REQUIRE(options);
  CG_REQUIRE(json_out);
  return guarded([&] {
    VerifyOptions o;
    o.k = options->k;
    o.seed = options->seed;
    o.jobs = options->jobs;
    o.mc_samples = options->mc_samples;
    o.pullback_points = options->pullback_points;
    o.fd_step = options->fd_step;
    if (options->nodes_k2 < 8 || options->nodes_k3 < 8) {
      fail(ErrorCode::InvalidArgument, "verify: quadrature needs at least 8 nodes per axis");
    }
    o.quadrature.nodes_k2 = options->nodes_k2;
    o.quadrature.nodes_k3 = options->nodes_k3;
    const VerifyReport report = run_verification_suite(o);
    const std::string json = report.to_json();
    char* buf = static_cast<char*>(std::malloc(json.size() + 1));
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, json.c_str(), json.size() + 1);
    *json_out = buf;
    if (all_passed) *all_passed = report.all_pass() ? 1 : 0;
  });
}

void cg_string_free(char* s) { std::free(s); }

}  // extern "C"
