#include <json.hpp>

#include <cmath>

#include "concrete_geom/json_writer.hpp"
#include "concrete_geom/verification.hpp"
#include "test_support.hpp"

namespace concrete {
namespace {

VerifyOptions quick(std::size_t k, std::uint64_t seed) {
  VerifyOptions o;
  o.k = k;
  o.seed = seed;
  o.mc_samples = 20'000;
  return o;
}

TEST(Checks, Bands) {
  EXPECT_TRUE(se_check("a", 1.0, 1.39, 0.1).pass);
  EXPECT_FALSE(se_check("a", 1.0, 1.41, 0.1).pass);
  EXPECT_TRUE(se_check("a", 1.0, 1.0, 0.0).pass);
  EXPECT_FALSE(se_check("a", 1.0, NAN, 1.0).pass);
  EXPECT_TRUE(tol_check("b", 0.0, 1e-7, 1e-6).pass);
  EXPECT_FALSE(tol_check("b", 0.0, 2e-6, 1e-6).pass);
  EXPECT_FALSE(all_pass({tol_check("b", 0.0, 0.0, 0.0), tol_check("c", 0.0, 1.0, 0.0)}));
}

TEST(Ks, StatisticAndCriticalValue) {
  EXPECT_NEAR(ks_critical_value_1pct(100), 0.16276, 1e-5);
  // Quantile midpoints give D = 1/(2n).
  std::vector<double> mid;
  for (int i = 0; i < 10; ++i) mid.push_back((i + 0.5) / 10.0);
  EXPECT_NEAR(ks_statistic(mid, [](double u) { return u; }), 0.05, 1e-15);
  EXPECT_ERROR_CODE(ks_statistic({}, [](double u) { return u; }), ErrorCode::InvalidArgument);
  EXPECT_ERROR_CODE(ks_concrete_marginal(ConcreteParams(PositiveWeights::ones(3), 1.0),
                                         {SimplexPoint::uniform(3)}),
                    ErrorCode::UnsupportedDim);
}

TEST(JsonWriterTest, RoundTripsDoubles) {
  JsonWriter w;
  const double v = 0.1 + 0.2;
  w.begin_object().key("v").value(v).key("n").value(NAN).key("s").value("a\"b").end_object();
  const auto j = nlohmann::json::parse(w.str());
  EXPECT_EQ(j["v"].get<double>(), v);
  EXPECT_TRUE(j["n"].is_null());
  EXPECT_EQ(j["s"], "a\"b");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.33333333333333331");
}

TEST(Suite, PassesAndHasSchema) {
  for (std::size_t k : {2u, 3u}) {
    const VerifyReport r = run_verification_suite(quick(k, 7));
    for (const Check& c : r.checks) EXPECT_TRUE(c.pass) << c.name << " " << c.estimate;
    const auto j = nlohmann::json::parse(r.to_json());
    EXPECT_EQ(j["seed"], 7);
    EXPECT_EQ(j["version"], library_version());
    ASSERT_EQ(j["checks"].size(), r.checks.size());
    for (const auto& c : j["checks"]) {
      for (const char* key : {"name", "target", "estimate", "se_or_tol", "pass"}) {
        EXPECT_TRUE(c.contains(key)) << key;
      }
    }
  }
}

TEST(Suite, DeterministicAcrossRunsAndJobs) {
  const std::string a = run_verification_suite(quick(3, 99)).to_json();
  const std::string b = run_verification_suite(quick(3, 99)).to_json();
  VerifyOptions parallel = quick(3, 99);
  parallel.jobs = 4;
  const std::string c = run_verification_suite(parallel).to_json();
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_NE(a, run_verification_suite(quick(3, 100)).to_json());
}

TEST(Suite, HigherDimensionUsesMonteCarlo) {
  const VerifyReport r = run_verification_suite(quick(5, 3));
  EXPECT_TRUE(r.all_pass());
}

TEST(Suite, RejectsBadOptions) {
  VerifyOptions o = quick(1, 0);
  EXPECT_ERROR_CODE(run_verification_suite(o), ErrorCode::DomainError);
  o = quick(2, 0);
  o.mc_samples = 10;
  EXPECT_ERROR_CODE(run_verification_suite(o), ErrorCode::InvalidArgument);
}

TEST(Rng, DerivedStreamsDiffer) {
  const RngState root(5);
  RngState a = root.derive(0);
  RngState b = root.derive(1);
  RngState a2 = root.derive(0);
  EXPECT_NE(a.next_u64(), b.next_u64());
  RngState a3 = root.derive(0);
  EXPECT_EQ(a2.next_u64(), a3.next_u64());
  RngState r(8);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform_open();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace concrete
