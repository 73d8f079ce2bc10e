#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace mrproxy {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mrproxy_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string dag(const std::string& name) const {
    return std::string(MRPROXY_SOURCE_DIR) + "/dags/" + name;
  }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"simulate", "--n", "-3"}).code, kExitUsage);
  EXPECT_EQ(run({"check-dag", dag("missing.dag"), "--instrument", "G", "--exposure", "A",
                 "--outcome", "Y"})
                .code,
            kExitUsage);
}

TEST_F(CliTest, CheckDagExitCodes) {
  const auto ok = run({"check-dag", dag("canonical.dag"), "--instrument", "G", "--exposure", "A_P",
                       "--outcome", "Y_P"});
  EXPECT_EQ(ok.code, kExitOk) << ok.err;
  EXPECT_NE(ok.out.find("valid"), std::string::npos);

  const auto bad = run({"check-dag", dag("vaccine_exclusion.dag"), "--instrument", "G_P",
                        "--exposure", "A_P", "--outcome", "Y_P"});
  EXPECT_EQ(bad.code, kExitFailed);
  EXPECT_NE(bad.out.find("G_P -> B_P -> Y_P"), std::string::npos) << bad.out;

  const auto unknown = run({"check-dag", dag("canonical.dag"), "--instrument", "Q", "--exposure",
                            "A", "--outcome", "Y"});
  EXPECT_EQ(unknown.code, kExitUsage);
  EXPECT_NE(unknown.err.find("Q"), std::string::npos);
}

TEST_F(CliTest, CheckDagJson) {
  const auto r = run({"check-dag", dag("vaccine_exclusion.dag"), "--instrument", "G",
                      "--exposure", "A_P", "--outcome", "Y_P", "--format", "json"});
  EXPECT_EQ(r.code, kExitFailed);
  EXPECT_NE(r.out.find("\"unconfounded\": false"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("G <- G_P -> B_P -> Y_P"), std::string::npos);
}

TEST_F(CliTest, CheckDagWritesOutputFile) {
  const auto r = run({"check-dag", dag("canonical.dag"), "--instrument", "G", "--exposure", "A",
                      "--outcome", "Y", "--out", path("iv.txt")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(slurp(path("iv.txt")).find("valid"), std::string::npos);
}

TEST_F(CliTest, SimulateIsDeterministic) {
  const auto a = run({"simulate", "--n", "10", "--seed", "7"});
  const auto b = run({"simulate", "--n", "10", "--seed", "7"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "id,d_child,y_parent,a_child");
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 11);
  EXPECT_NE(a.out, run({"simulate", "--n", "10", "--seed", "8"}).out);

  ASSERT_EQ(run({"simulate", "--n", "500", "--seed", "7", "--threads", "1", "--reveal-latent",
                 "--out", path("a.csv")})
                .code,
            kExitOk);
  ASSERT_EQ(run({"simulate", "--n", "500", "--seed", "7", "--threads", "3", "--reveal-latent",
                 "--out", path("b.csv")})
                .code,
            kExitOk);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
}

TEST_F(CliTest, EstimateReadsSimulatedCsv) {
  ASSERT_EQ(run({"simulate", "--n", "50000", "--seed", "3", "--out", path("d.csv")}).code,
            kExitOk);
  const auto r = run({"estimate", path("d.csv"), "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("\"proxy_wald\""), std::string::npos);
  EXPECT_NE(r.out.find("\"wald_child\": null"), std::string::npos) << r.out;

  std::ofstream(path("bad.csv")) << "id,d_child\n0,1\n";
  EXPECT_EQ(run({"estimate", path("bad.csv")}).code, kExitUsage);
}

TEST_F(CliTest, MalformedConfigNamesTheField) {
  std::ofstream(path("bad.json")) << R"({"scm": {"parent": {"outcome_noise_sd": -1}}})";
  const auto r = run({"simulate", "--config", path("bad.json"), "--n", "10"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("scm.parent.outcome_noise_sd"), std::string::npos) << r.err;

  std::ofstream(path("typo.json")) << R"({"replicats": 2})";
  const auto t = run({"run", "--config", path("typo.json")});
  EXPECT_EQ(t.code, kExitUsage);
  EXPECT_NE(t.err.find("replicats"), std::string::npos) << t.err;
}

TEST_F(CliTest, RunScenarioPrintsWitness) {
  const auto r = run({"run-scenario", "vaccine_exclusion", "--n", "200000"});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_NE(r.out.find("G_P -> B_P -> Y_P"), std::string::npos) << r.out;
  EXPECT_EQ(run({"run-scenario", "no_such_scenario"}).code, kExitUsage);
  const auto list = run({"run-scenario", "--list"});
  EXPECT_NE(list.out.find("outcome_stable"), std::string::npos);
}

TEST_F(CliTest, RunAndReport) {
  std::ofstream(path("cfg.json"))
      << R"({"scenario": "baseline_mendelian", "scm": {"n": 20000}, "replicates": 3,
             "master_seed": 5, "oracle_n": 1000})";
  ASSERT_EQ(run({"run", "--config", path("cfg.json"), "--out", path("r1.json")}).code, kExitOk);
  ASSERT_EQ(run({"run", "--config", path("cfg.json"), "--out", path("r2.json")}).code, kExitOk);
  EXPECT_EQ(slurp(path("r1.json")), slurp(path("r2.json")));
  ASSERT_EQ(run({"run", "--config", path("cfg.json"), "--format", "csv", "--out", path("r.csv")})
                .code,
            kExitOk);
  EXPECT_EQ(slurp(path("r.csv")).rfind("replicate,replicate_seed,status", 0), 0u);

  const auto rep = run({"report", path("r1.json"), path("r2.json")});
  ASSERT_EQ(rep.code, kExitOk) << rep.err;
  EXPECT_NE(rep.out.find("\"proxy_wald\""), std::string::npos) << rep.out;
  EXPECT_NE(rep.out.find("\"count\": 6"), std::string::npos) << rep.out;
}

}  // namespace
}  // namespace mrproxy
