#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include "concrete_geom/concrete_geom.h"

namespace {

struct Params {
  cg_params* p = nullptr;
  Params(std::vector<double> beta, double tau) {
    EXPECT_EQ(cg_params_create(beta.data(), beta.size(), tau, &p), CG_OK);
  }
  Params(std::vector<double> alpha, std::vector<double> beta, double tau) {
    EXPECT_EQ(cg_params_create_is(alpha.data(), beta.data(), beta.size(), tau, &p), CG_OK);
  }
  ~Params() { cg_params_destroy(p); }
  Params(const Params&) = delete;
  Params& operator=(const Params&) = delete;
};

struct Rng {
  cg_rng* r = nullptr;
  explicit Rng(uint64_t seed) { EXPECT_EQ(cg_rng_create(seed, &r), CG_OK); }
  ~Rng() { cg_rng_destroy(r); }
  Rng(const Rng&) = delete;
  Rng& operator=(const Rng&) = delete;
};

TEST(CApi, VersionAndStatusStrings) {
  EXPECT_STREQ(cg_version(), "1.0.0");
  for (int s = CG_OK; s <= CG_ERR_OUT_OF_MEMORY; ++s) {
    EXPECT_GT(std::strlen(cg_status_string(cg_status(s))), 0u);
  }
  EXPECT_STREQ(cg_status_string(cg_status(999)), "unknown status");
}

TEST(CApi, CreateValidation) {
  cg_params* p = nullptr;
  const double beta[] = {1.0, 0.0};
  EXPECT_EQ(cg_params_create(beta, 2, 1.0, &p), CG_ERR_NON_POSITIVE_ENTRY);
  EXPECT_EQ(p, nullptr);
  EXPECT_NE(std::string(cg_last_error_message()), "");
  const double good[] = {1.0, 2.0};
  EXPECT_EQ(cg_params_create(good, 2, 0.0, &p), CG_ERR_NON_POSITIVE_TEMPERATURE);
  EXPECT_EQ(cg_params_create(good, 1, 1.0, &p), CG_ERR_DOMAIN);
  EXPECT_EQ(cg_params_create(nullptr, 2, 1.0, &p), CG_ERR_NULL_POINTER);
  EXPECT_EQ(cg_params_create(good, 2, 1.0, nullptr), CG_ERR_NULL_POINTER);
  EXPECT_EQ(cg_params_create(good, 2, 1.0, &p), CG_OK);
  EXPECT_STREQ(cg_last_error_message(), "");
  EXPECT_EQ(cg_params_dim(p), 2u);
  EXPECT_EQ(cg_params_has_alpha(p), 0);
  cg_params_destroy(p);
  cg_params_destroy(nullptr);
  cg_rng_destroy(nullptr);
}

TEST(CApi, LastErrorIsPerThread) {
  cg_params* p = nullptr;
  const double bad[] = {-1.0, 1.0};
  ASSERT_EQ(cg_params_create(bad, 2, 1.0, &p), CG_ERR_NON_POSITIVE_ENTRY);
  std::string other = "unset";
  std::thread([&] { other = cg_last_error_message(); }).join();
  EXPECT_EQ(other, "");
  EXPECT_NE(std::string(cg_last_error_message()), "");
}

TEST(CApi, SampleReproducible) {
  Params p({1, 2, 3}, 0.8);
  std::vector<double> a(300), b(300);
  {
    Rng r(42);
    ASSERT_EQ(cg_sample(p.p, r.r, 100, a.data()), CG_OK);
  }
  {
    Rng r(42);
    ASSERT_EQ(cg_sample(p.p, r.r, 100, b.data()), CG_OK);
  }
  EXPECT_EQ(a, b);
  for (std::size_t i = 0; i < 100; ++i) {
    EXPECT_NEAR(a[3 * i] + a[3 * i + 1] + a[3 * i + 2], 1.0, 1e-14);
  }
  Params is({2, 1, 1}, {1, 1, 1}, 1.0);
  Rng r(1);
  EXPECT_EQ(cg_sample(is.p, r.r, 1, a.data()), CG_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(cg_sample(p.p, nullptr, 1, a.data()), CG_ERR_NULL_POINTER);
}

TEST(CApi, DensityAndMoments) {
  Params c({1, 2, 3}, 0.7);
  const double x[] = {0.2, 0.3, 0.5};
  double v = 0.0;
  ASSERT_EQ(cg_log_density(c.p, x, 3, &v), CG_OK);
  EXPECT_NEAR(v, 0.13058657931444344, 1e-13);
  EXPECT_EQ(cg_log_density(c.p, x, 2, &v), CG_ERR_DIM_MISMATCH);
  const double edge[] = {0.0, 0.5, 0.5};
  EXPECT_EQ(cg_log_density(c.p, edge, 3, &v), CG_ERR_BOUNDARY_POINT);

  Params is({2, 3}, {1, 2}, 1.5);
  ASSERT_EQ(cg_lr_mean(is.p, 0, 1, &v), CG_OK);
  EXPECT_NEAR(v, -0.12876478703996354, 1e-14);
  ASSERT_EQ(cg_lr_var(is.p, 0, 1, &v), CG_OK);
  EXPECT_NEAR(v, 0.46216361497620128, 1e-13);
  ASSERT_EQ(cg_lr_cov(is.p, 0, 1, 0, 1, &v), CG_OK);
  EXPECT_NEAR(v, 0.46216361497620128, 1e-13);
  EXPECT_EQ(cg_lr_mean(is.p, 0, 2, &v), CG_ERR_INDEX_OUT_OF_RANGE);
  EXPECT_EQ(cg_params_has_alpha(is.p), 1);
  ASSERT_EQ(cg_log_norm_const(c.p, &v), CG_OK);
  EXPECT_TRUE(std::isfinite(v));
}

TEST(CApi, FisherAndGeometry) {
  Params p({0.7, 0.3}, 2.0);
  double red[4];
  ASSERT_EQ(cg_fisher(p.p, 0, red), CG_OK);
  EXPECT_NEAR(red[0], 7.5585789871504157, 1e-12);
  EXPECT_NEAR(red[1], -0.6724586193549235, 1e-12);
  EXPECT_NEAR(red[2], red[1], 0.0);
  EXPECT_NEAR(red[3], 0.41731514982609884, 1e-12);
  double full[9];
  ASSERT_EQ(cg_fisher(p.p, 1, full), CG_OK);
  EXPECT_NEAR(full[0] * 0.7 + full[1] * 0.3, 0.0, 1e-12);

  double ell = 0.0;
  ASSERT_EQ(cg_curvature_length(2, &ell), CG_OK);
  EXPECT_NEAR(ell, 1.1958076954784512, 1e-15);
  EXPECT_EQ(cg_curvature_length(1, &ell), CG_ERR_DOMAIN);

  double eta[2];
  ASSERT_EQ(cg_to_poincare(p.p, eta, &ell), CG_OK);
  EXPECT_EQ(eta[1], 0.5);
  double beta[2];
  double tau = 0.0;
  ASSERT_EQ(cg_from_poincare(eta, 2, beta, &tau), CG_OK);
  EXPECT_NEAR(beta[0], 0.7, 1e-14);
  EXPECT_NEAR(tau, 2.0, 1e-14);
  const double below[] = {0.1, -1.0};
  EXPECT_EQ(cg_from_poincare(below, 2, beta, &tau), CG_ERR_DOMAIN);

  Params a({1, 1}, 1.0);
  Params b({1, 1}, 4.0);
  double d = 0.0;
  ASSERT_EQ(cg_fr_distance(a.p, b.p, &d), CG_OK);
  EXPECT_NEAR(d, 1.6577414652255482, 1e-12);
  Params c3({1, 1, 1}, 1.0);
  EXPECT_EQ(cg_fr_distance(a.p, c3.p, &d), CG_ERR_DIM_MISMATCH);
  const double u[] = {0.5, 0.5};
  const double w[] = {0.9, 0.1};
  ASSERT_EQ(cg_categorical_distance(u, w, 2, &d), CG_OK);
  EXPECT_NEAR(d, 0.92729521800161217, 1e-14);
}

TEST(CApi, TransformsAndRounding) {
  Params p({1, 2, 3}, 0.6);
  const double x[] = {0.2, 0.3, 0.5};
  double y[3], back[3];
  ASSERT_EQ(cg_uniform_transform(p.p, x, 3, 0, y), CG_OK);
  ASSERT_EQ(cg_uniform_transform(p.p, y, 3, 1, back), CG_OK);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(back[i], x[i], 1e-12);
  ASSERT_EQ(cg_escort_transform(p.p, x, 3, 1, y), CG_OK);
  double norm = 0.0;
  for (int i = 0; i < 3; ++i) norm += (i + 1) * std::pow(x[i], 0.6);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(y[i], (i + 1) * std::pow(x[i], 0.6) / norm, 1e-15);
  EXPECT_EQ(cg_escort_transform(p.p, x, 3, 0, y), CG_ERR_INVALID_ARGUMENT);

  const double beta[] = {1, 2, 3};
  double prob[3], vol[3];
  ASSERT_EQ(cg_rounding_probabilities(beta, 3, prob, vol), CG_OK);
  ASSERT_EQ(cg_rounding_probabilities(beta, 3, prob, nullptr), CG_OK);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(prob[i], beta[i] / 6.0, 1e-15);
    EXPECT_NEAR(vol[i], prob[i], 1e-12);
  }
  Rng r(3);
  double f[3];
  ASSERT_EQ(cg_round_frequencies(p.p, r.r, 100000, f), CG_OK);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(f[i], prob[i], 0.01);
}

TEST(CApi, Verify) {
  cg_verify_options o;
  cg_verify_options_default(&o);
  EXPECT_EQ(o.k, 2u);
  o.seed = 5;
  o.jobs = 2;
  o.mc_samples = 20000;
  char* json = nullptr;
  int passed = 0;
  ASSERT_EQ(cg_verify(&o, &json, &passed), CG_OK);
  ASSERT_NE(json, nullptr);
  EXPECT_EQ(passed, 1);
  const auto j = nlohmann::json::parse(json);
  EXPECT_EQ(j["seed"], 5);
  EXPECT_GT(j["checks"].size(), 50u);
  cg_string_free(json);
  o.nodes_k2 = 2;
  EXPECT_EQ(cg_verify(&o, &json, &passed), CG_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(cg_verify(nullptr, &json, &passed), CG_ERR_NULL_POINTER);
}

}  // namespace
