#include "card_data.hpp"

#include "yfwl/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace yfwl;
using yfwl::cli::RunConfig;

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "yfwl_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path path = scratch(name);
  std::ofstream(path) << text;
  return path.string();
}

// 60 rows: y, x endogenous, w exogenous, z1 z2 instruments, g cluster label.
std::string iv_csv() {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n;
  std::ostringstream os;
  os.precision(17);
  os << "y,x,w,z1,z2,g\n";
  for (int i = 0; i < 60; ++i) {
    const double w = n(rng), z1 = n(rng), z2 = n(rng), v = n(rng);
    const double e = 0.5 * v + n(rng) * (0.5 + std::abs(z1));
    const double x = z1 + 0.5 * z2 + 0.3 * w + v;
    os << 1 + 0.4 * x - 0.2 * w + e << "," << x << "," << w << "," << z1 << "," << z2 << ",c"
       << i % 6 << "\n";
  }
  return write_file("iv.csv", os.str());
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "yfwl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  RunConfig config;
  if (auto code = cli::parse_args(static_cast<int>(argv.size()), argv.data(), config, out, err)) {
    return {*code, out.str(), err.str()};
  }
  const int code = cli::run(config, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> iv_args(const std::string& estimator, const std::string& mode) {
  return {"--data",        iv_csv(), "--outcome", "y",      "--endogenous", "x", "--exogenous", "w",
          "--instruments", "z1,z2",  "--estimator", estimator, "--mode",   mode};
}

}  // namespace

TEST(Cli, ToyExactFit) {
  const std::string path = write_file("toy.csv", "y,x\n2,1\n4,2\n6,3\n");
  const Outcome r = invoke({"--data", path, "--outcome", "y", "--endogenous", "x", "--estimator", "ols",
                            "--mode", "full", "--no-intercept"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json report = Json::parse(r.out);
  EXPECT_EQ(report["schema"], "yfwl-report/1");
  const auto& coef = report["fits"][0]["coefficients"][0];
  EXPECT_EQ(coef["name"], "x");
  EXPECT_NEAR(coef["estimate"].get<double>(), 2.0, 1e-14);
}

TEST(Cli, ComparePassesForTsls) {
  std::vector<std::string> args = iv_args("2sls", "compare");
  args.insert(args.end(), {"--vcov", "hc1"});
  const Outcome r = invoke(args);
  ASSERT_EQ(r.code, 0) << r.err;
  const Json report = Json::parse(r.out);
  EXPECT_EQ(report["comparison"]["verdicts"]["overall"], "pass");
  EXPECT_EQ(report["fits"].size(), 2u);
  EXPECT_TRUE(report["fits"][1]["coefficients"][0].contains("se"));
  EXPECT_EQ(report["diagnostics"]["k3"], 2);
}

TEST(Cli, IgmmIsExpectedFailureWithExitZero) {
  const Outcome r = invoke(iv_args("igmm", "compare"));
  ASSERT_EQ(r.code, 0) << r.err;
  const Json report = Json::parse(r.out);
  EXPECT_TRUE(report["comparison"]["expected_failure"].get<bool>());
  EXPECT_EQ(report["comparison"]["verdicts"]["coefficients"], "fail");
}

TEST(Cli, EveryEstimatorRunsInEveryFitMode) {
  for (const std::string est : {"ols", "2sls", "liml", "fuller", "igmm", "2sgmm"}) {
    for (const std::string mode : {"full", "partial", "compare"}) {
      const Outcome r = invoke(iv_args(est, mode));
      EXPECT_EQ(r.code, 0) << est << " " << mode << ": " << r.err;
    }
  }
  std::vector<std::string> k = iv_args("kclass", "compare");
  k.insert(k.end(), {"--kappa", "0.5"});
  EXPECT_EQ(invoke(k).code, 0);
}

TEST(Cli, PartialHc3UsesFullDesignLeverages) {
  std::vector<std::string> args = iv_args("2sls", "partial");
  args.insert(args.end(), {"--vcov", "hc3"});
  const Outcome partial = invoke(args);
  ASSERT_EQ(partial.code, 0) << partial.err;
  args = iv_args("2sls", "full");
  args.insert(args.end(), {"--vcov", "hc3"});
  const Outcome full = invoke(args);
  const Json p = Json::parse(partial.out)["fits"][0];
  const Json f = Json::parse(full.out)["fits"][0];
  EXPECT_EQ(p["vcov_method"], "full-design-leverages");
  const double se_p = p["coefficients"][0]["se"].get<double>();
  const double se_f = f["coefficients"].back()["se"].get<double>();
  EXPECT_NEAR(se_p, se_f, 1e-8 * se_f);
}

TEST(Cli, ClusterAndHac) {
  std::vector<std::string> args = iv_args("2sls", "compare");
  args.insert(args.end(), {"--cluster", "g", "--vcov", "cluster-cv1"});
  Outcome r = invoke(args);
  ASSERT_EQ(r.code, 0) << r.err;
  args = iv_args("2sls", "compare");
  args.insert(args.end(), {"--vcov", "hac", "--hac-lags", "2"});
  r = invoke(args);
  ASSERT_EQ(r.code, 0) << r.err;
}

TEST(Cli, ValidationErrorsExitTwo) {
  std::vector<std::string> args = iv_args("2sls", "full");
  args[7] = "nope";  // --exogenous
  Outcome r = invoke(args);
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_NE(r.err.find("UnknownColumn"), std::string::npos);

  r = invoke(iv_args("kclass", "full"));
  EXPECT_EQ(r.code, cli::kExitValidation);

  args = iv_args("2sls", "full");
  args.insert(args.end(), {"--hac-lags", "2"});
  EXPECT_EQ(invoke(args).code, cli::kExitValidation);

  args = iv_args("liml", "full");
  args.insert(args.end(), {"--vcov", "hc0"});
  EXPECT_EQ(invoke(args).code, cli::kExitValidation);

  EXPECT_EQ(invoke({"--estimator", "cue"}).code, cli::kExitValidation);
  EXPECT_EQ(invoke({"--mode", "full"}).code, cli::kExitValidation);

  const std::string bad = write_file("bad.csv", "y,x\n1,2\n3,oops\n");
  r = invoke({"--data", bad, "--outcome", "y", "--endogenous", "x", "--estimator", "ols"});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_NE(r.err.find("ParseError"), std::string::npos);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, NumericalErrorsExitThree) {
  const std::string path = write_file("collinear.csv", "y,x,w\n1,1,2\n2,2,4\n4,3,6\n3,4,8\n");
  const Outcome r = invoke({"--data", path, "--outcome", "y", "--endogenous", "x", "--exogenous", "w",
                            "--estimator", "ols"});
  EXPECT_EQ(r.code, cli::kExitNumerical);
  EXPECT_NE(r.err.find("RankDeficient"), std::string::npos);
}

TEST(Cli, DropMissingReported) {
  const std::string path = write_file("missing.csv", "y,x\n1,1\n2,NA\n3,2.5\n5,4\n");
  Outcome r = invoke({"--data", path, "--outcome", "y", "--endogenous", "x", "--estimator", "ols"});
  EXPECT_EQ(r.code, cli::kExitValidation);
  r = invoke({"--data", path, "--outcome", "y", "--endogenous", "x", "--estimator", "ols", "--drop-missing"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["diagnostics"]["dropped_rows"], 1);
}

TEST(Cli, DeterministicAndRoundTrips) {
  const std::vector<std::string> args = iv_args("fuller", "compare");
  const Outcome a = invoke(args);
  const Outcome b = invoke(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const Json parsed = Json::parse(a.out);
  EXPECT_EQ(parsed.dump(2) + "\n", a.out);

  std::vector<std::string> table_args = args;
  table_args.insert(table_args.end(), {"--format", "table"});
  const Outcome table = invoke(table_args);
  ASSERT_EQ(table.code, 0);
  EXPECT_EQ(render_table(parsed), table.out);
  EXPECT_NE(table.out.find("full vs partial"), std::string::npos);
}

TEST(Cli, SweepAndLimitationModes) {
  Outcome r = invoke({"--estimator", "liml", "--mode", "sweep", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json sweep = Json::parse(r.out)["sweep"];
  ASSERT_EQ(sweep.size(), cli::kSweepSizes.size());
  EXPECT_EQ(sweep[0]["N"], 50);
  EXPECT_EQ(invoke({"--estimator", "liml", "--mode", "sweep", "--seed", "3"}).out, r.out);

  r = invoke({"--data", iv_csv(), "--outcome", "y", "--endogenous", "x", "--exogenous", "w", "--instruments",
              "z1", "--mode", "limitation-demo"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json lim = Json::parse(r.out)["limitation"];
  EXPECT_EQ(lim["labels"][0], "(Intercept)");
  EXPECT_EQ(lim["labels"][1], "w");
}

TEST(Cli, CardTslsCompare) {
  const auto path = card_csv_path();
  if (!path) GTEST_SKIP() << "Card CSV not found; run tools/fetch_card.py";
  const Outcome r = invoke({"--data", *path, "--outcome", "lwage", "--endogenous", "educ", "--instruments",
                            "nearc2,nearc4", "--exogenous",
                            "exper,expersq,black,south,smsa,reg661,reg662,reg663,reg664,reg665,reg666,reg667,"
                            "reg668,smsa66",
                            "--estimator", "2sls", "--mode", "compare"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json c = Json::parse(r.out)["comparison"];
  EXPECT_NEAR(c["coef_full_b2"][0].get<double>(), 0.15706, 5e-6);
  EXPECT_NEAR(c["coef_partial"][0].get<double>(), 0.15706, 5e-6);
  EXPECT_EQ(c["verdicts"]["overall"], "pass");
}
