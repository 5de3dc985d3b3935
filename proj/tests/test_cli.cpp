#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "simplex_lab/cli.hpp"

using namespace simplex_lab;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Json without_timestamp(const std::string& text) {
  Json j = Json::parse(text);
  j.erase("timestamp");
  return j;
}

}  // namespace

TEST(Cli, VerifyCardinalityPasses) {
  const auto r = run({"verify", "--distance", "cardinality", "--n", "4", "--space", "finite:3"});
  EXPECT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["schema"], "simplex-lab/1");
  EXPECT_EQ(j["command"], "verify");
  EXPECT_TRUE(j.contains("timestamp"));
  for (const auto& v : j["verdicts"]) EXPECT_NE(v["status"], "fail") << v.dump();
}

TEST(Cli, RepetitionInvarianceFailureExitsOne) {
  const auto r = run({"verify", "--distance", "arithmetic-mean", "--n", "3", "--check", "repetition-invariance",
                      "--budget", "1000"});
  EXPECT_EQ(r.code, 1);
  const Json j = Json::parse(r.out);
  bool found = false;
  for (const auto& v : j["verdicts"]) {
    if (v["property"] == "repetition-invariance") {
      EXPECT_EQ(v["status"], "fail");
      EXPECT_TRUE(v.contains("counterexample"));
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Cli, PowerVariantBelowDomainIsConfigError) {
  const auto r = run({"verify", "--distance", "inner-interval-power:p=2", "--n", "3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("2^p"), std::string::npos);
}

TEST(Cli, ConfigErrors) {
  EXPECT_EQ(run({"constants", "--distance", "no-such-distance"}).code, 2);
  EXPECT_EQ(run({"constants", "--distance", "cardinality", "--space", "finite:1"}).code, 2);
  EXPECT_EQ(run({"constants", "--distance", "cardinality", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"constants", "--distance", "cardinality", "--budget", "lots"}).code, 2);
  EXPECT_EQ(run({"constants", "--distance", "arithmetic-mean", "--space", "finite:3"}).code, 2);
  EXPECT_EQ(run({"constants"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, ConstantsRowsAndBudgetNotation) {
  const auto r = run({"constants", "--distance", "inner-interval", "--n", "5", "--k", "2..5", "--budget", "2e4"});
  EXPECT_EQ(r.code, 0) << r.out;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["config"]["budget"], 20000);
  ASSERT_EQ(j["rows"].size(), 4u);  // k = 2..4 and K*_n, which is k = 5
  for (const auto& row : j["rows"]) {
    ASSERT_TRUE(row.contains("expected"));
    EXPECT_NEAR(row["observed"].get<double>(), row["expected"].get<double>(), 1e-9);
    EXPECT_TRUE(row["witness"].contains("tuple"));
    EXPECT_TRUE(row["witness"].contains("z"));
    EXPECT_TRUE(row.contains("delta"));
    EXPECT_TRUE(row.contains("method"));
  }
}

TEST(Cli, JsonIsDeterministicApartFromTimestamp) {
  const std::vector<std::string> args = {"constants", "--distance", "enclosing-radius", "--n", "4", "--budget", "3000"};
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(without_timestamp(a.out), without_timestamp(b.out));
}

TEST(Cli, EnvironmentSeedOverridesDefaultOnly) {
  ::setenv("SIMPLEX_LAB_SEED", "7", 1);
  const auto env = run({"constants", "--distance", "arithmetic-mean", "--n", "3", "--budget", "100"});
  const auto flag = run({"constants", "--distance", "arithmetic-mean", "--n", "3", "--budget", "100", "--seed", "9"});
  ::setenv("SIMPLEX_LAB_SEED", "bad", 1);
  const auto bad = run({"constants", "--distance", "arithmetic-mean", "--n", "3", "--budget", "100"});
  ::unsetenv("SIMPLEX_LAB_SEED");
  const auto plain = run({"constants", "--distance", "arithmetic-mean", "--n", "3", "--budget", "100"});
  EXPECT_EQ(Json::parse(env.out)["config"]["seed"], 7);
  EXPECT_EQ(Json::parse(flag.out)["config"]["seed"], 9);
  EXPECT_EQ(Json::parse(plain.out)["config"]["seed"], 42);
  EXPECT_EQ(bad.code, 2);
}

TEST(Cli, CsvAndTextFormats) {
  const auto csv = run({"constants", "--distance", "cardinality", "--n", "3", "--format", "csv"});
  EXPECT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.rfind("name,", 0), 0u) << csv.out;
  EXPECT_GE(std::count(csv.out.begin(), csv.out.end(), '\n'), 2);
  const auto text = run({"constants", "--distance", "cardinality", "--n", "3", "--format", "text"});
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("cardinality"), std::string::npos);
}

TEST(Cli, OutFile) {
  const auto path = std::filesystem::temp_directory_path() / "simplex_lab_cli_test.json";
  std::filesystem::remove(path);
  const auto r = run({"constants", "--distance", "drastic", "--n", "3", "--out", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  EXPECT_EQ(Json::parse(buffer.str())["schema"], "simplex-lab/1");
  std::filesystem::remove(path);
}

TEST(Cli, Table1AreaRow) {
  const auto r = run({"table1", "--n", "3", "--budget", "5000"});
  EXPECT_EQ(r.code, 0) << r.out;
  const Json j = Json::parse(r.out);
  bool area = false;
  for (const auto& row : j["rows"]) {
    if (row["name"] == "enclosing-area") {
      EXPECT_NEAR(row["observed"].get<double>(), 2.0 / 3.0, 1e-6);
      area = true;
    }
  }
  EXPECT_TRUE(area);
}

TEST(Cli, MultidistanceFamilies) {
  EXPECT_EQ(run({"multidistance", "--distance", "enclosing-radius", "--n", "4", "--budget", "500"}).code, 0);
  EXPECT_EQ(run({"multidistance", "--distance", "line-count", "--n", "4", "--budget", "500"}).code, 1);
  EXPECT_EQ(run({"multidistance", "--distance", "arithmetic-mean", "--n", "4", "--budget", "500"}).code, 0);
}

TEST(Cli, ConstructionsThroughDistanceIds) {
  const auto r = run({"constants", "--distance", "single-anchor:s=0.4", "--n", "4"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NEAR(Json::parse(r.out)["rows"][0]["observed"].get<double>(), 0.4, 1e-12);
  const auto w = run({"verify", "--distance", "appendix-witness:k=2", "--n", "4", "--check", "strong"});
  EXPECT_EQ(w.code, 0) << w.out << w.err;
}

TEST(Cli, ArityDefaultsPerSubcommand) {
  EXPECT_EQ(Json::parse(run({"constants", "--distance", "drastic"}).out)["config"]["n"], 4);
  EXPECT_EQ(Json::parse(run({"multidistance", "--distance", "enclosing-radius", "--budget", "100"}).out)["config"]["n"],
            5);
}
