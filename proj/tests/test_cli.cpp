#include <gtest/gtest.h>
#include <json.hpp>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

struct Result {
  int exit_code;
  std::string out;
};

// Runs the CLI through the shell; stderr is discarded unless requested.
Result run(const std::string& args, const std::string& env = "", bool merge_stderr = false) {
  const std::string cmd = env + " " + CLI_PATH + " " + args +
                          (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string write_config(const std::string& name, const std::string& body) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << body;
  return path;
}

TEST(Cli, SampleIsDeterministic) {
  const Result a = run("sample --beta 1,2,3 --tau 0.5 -n 20 --seed 11 --format csv");
  const Result b = run("sample --beta 1,2,3 --tau 0.5 -n 20 --seed 11 --format csv");
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "x1,x2,x3");
  EXPECT_NE(a.out, run("sample --beta 1,2,3 --tau 0.5 -n 20 --seed 12 --format csv").out);
  const auto j = nlohmann::json::parse(run("sample --beta 1,2 --tau 1 -n 5 --seed 1").out);
  EXPECT_EQ(j["samples"].size(), 5u);
}

TEST(Cli, DistanceJson) {
  const Result r = run("distance --beta-a 1,1 --tau-a 1 --beta-b 1,1 --tau-b 4");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["distance"].get<double>(), 1.6577414652255482, 1e-12);
}

TEST(Cli, FisherAndPoincare) {
  const auto f = nlohmann::json::parse(run("fisher --beta 0.7,0.3 --tau 2").out);
  EXPECT_NEAR(f["matrix"][0][0].get<double>(), 7.5585789871504157, 1e-12);
  const auto p = nlohmann::json::parse(run("poincare --beta 2,1 --tau 1").out);
  EXPECT_NEAR(p["eta"][0].get<double>(), 0.33465975574291332, 1e-15);
  const Result inv = run("poincare --inverse --eta 0,0.5 --format csv");
  ASSERT_EQ(inv.exit_code, 0);
  EXPECT_NE(inv.out.find("0.5,0.5,2"), std::string::npos) << inv.out;
}

TEST(Cli, MomentsCsvIsLongFormat) {
  const Result r = run("moments --beta 1,2 --alpha 2,3 --tau 1.5 --format csv");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "quantity,i,k,j,l,value");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("").exit_code, 1);
  EXPECT_EQ(run("frobnicate").exit_code, 1);
  EXPECT_EQ(run("sample --beta 1,2").exit_code, 1);
  EXPECT_EQ(run("distance --beta-a 1,1 --tau-a 1 --beta-b 1,1 --tau-b x").exit_code, 1);
  const Result usage = run("sample --beta 1,2", "", true);
  EXPECT_NE(usage.out.find("--tau"), std::string::npos);
  EXPECT_EQ(run("pdf --beta 1,1 --tau 1 --x 0,1").exit_code, 3);
  EXPECT_EQ(run("sample --beta 1,-1 --tau 1").exit_code, 3);
  EXPECT_EQ(run("round --beta 1,2,3 --tau 0.7 -n 20000 --seed 3").exit_code, 0);
  EXPECT_EQ(run("--version").exit_code, 0);
}

TEST(Cli, ConfigFile) {
  const std::string coarse = write_config("coarse.cfg", "# deliberately coarse\nnodes_k2 = 8\n");
  const Result failed = run("verify --k 2 --seed 1 --mc-samples 20000",
                            "CONCRETE_GEOM_CONFIG=" + coarse);
  EXPECT_EQ(failed.exit_code, 2);
  EXPECT_FALSE(nlohmann::json::parse(failed.out)["checks"].empty());

  const std::string small = write_config("small.cfg", "mc_samples=10\n");
  EXPECT_EQ(run("verify --k 2 --seed 1", "CONCRETE_GEOM_CONFIG=" + small).exit_code, 3);
  EXPECT_EQ(run("verify --k 2 --seed 1 --mc-samples 20000", "CONCRETE_GEOM_CONFIG=" + small)
                .exit_code,
            0);

  const std::string unknown = write_config("unknown.cfg", "colour=blue\n");
  EXPECT_EQ(run("verify --k 2", "CONCRETE_GEOM_CONFIG=" + unknown).exit_code, 1);
  const std::string bad = write_config("bad.cfg", "mc_samples=lots\n");
  EXPECT_EQ(run("verify --k 2", "CONCRETE_GEOM_CONFIG=" + bad).exit_code, 1);
  EXPECT_EQ(run("verify --k 2", "CONCRETE_GEOM_CONFIG=/nonexistent/file").exit_code, 1);
}

TEST(Cli, VerifyPassesAndIsReproducible) {
  const Result a = run("verify --k 2 --seed 7 --jobs 2 --mc-samples 20000");
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, run("verify --k 2 --seed 7 --jobs 1 --mc-samples 20000").out);
  const Result csv = run("verify --k 2 --seed 7 --mc-samples 20000 --format csv");
  ASSERT_EQ(csv.exit_code, 0);
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "name,target,estimate,se_or_tol,pass");
}

}  // namespace
