#include "hadprox/checks.hpp"
#include "hadprox/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

using namespace hadprox;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hadprox_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const json& j, const std::string& name = "cfg.json") {
    const fs::path p = dir_ / name;
    std::ofstream(p) << j.dump(2);
    return p.string();
  }
  std::string out(const std::string& sub = "out") const { return (dir_ / sub).string(); }

  static json base() {
    return json{{"manifold", {{"kind", "euclidean"}, {"dim", 2}}},
                {"problem", {{"name", "squared_distances"}, {"anchors", {{0, 0}, {1, 0.5}}}, {"start", {2, -1}}}}};
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
  std::ostringstream o_, e_;
  cli::Streams io_{o_, e_};
};

int argv_main(std::vector<std::string> args) {
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_F(Cli, RunWritesOutputs) {
  EXPECT_EQ(cli::cmd_run(write(base()), out(), std::nullopt, false, io_), cli::kOk);
  EXPECT_TRUE(fs::exists(fs::path(out()) / "trace.csv"));
  const json r = json::parse(slurp(fs::path(out()) / "result.json"));
  EXPECT_EQ(r["status"], "step_converged");
  EXPECT_TRUE(r["audits"]["descent"]["passed"].get<bool>());
  EXPECT_TRUE(r["audits"]["fejer"]["passed"].get<bool>());
  EXPECT_LE(r["audits"]["distance_to_efficient_set"].get<double>(), 1e-5);
  EXPECT_NE(o_.str().find("status=step_converged"), std::string::npos);
}

TEST_F(Cli, RunIsDeterministic) {
  json j = base();
  j["manifold"] = {{"kind", "hyperboloid"}, {"dim", 2}};
  const std::string cfg = write(j);
  ASSERT_EQ(cli::cmd_run(cfg, out("a"), 5, false, io_), cli::kOk);
  ASSERT_EQ(cli::cmd_run(cfg, out("b"), 5, false, io_), cli::kOk);
  EXPECT_EQ(slurp(fs::path(out("a")) / "trace.csv"), slurp(fs::path(out("b")) / "trace.csv"));
  EXPECT_EQ(slurp(fs::path(out("a")) / "result.json"), slurp(fs::path(out("b")) / "result.json"));
}

TEST_F(Cli, VerbosePrintsInnerSteps) {
  EXPECT_EQ(cli::cmd_run(write(base()), out(), std::nullopt, true, io_), cli::kOk);
  EXPECT_NE(e_.str().find("inner t="), std::string::npos);
}

TEST_F(Cli, ZeroLambdaIsConfigError) {
  json j = base();
  j["outer"] = {{"lambda", {{"kind", "constant"}, {"value", 0.0}}}};
  EXPECT_EQ(cli::cmd_run(write(j), out(), std::nullopt, false, io_), cli::kConfigError);
  EXPECT_NE(e_.str().find("config error"), std::string::npos);
}

TEST_F(Cli, MaxOuterExitCode) {
  json j = base();
  j["outer"] = {{"max_outer", 1}};
  EXPECT_EQ(cli::cmd_run(write(j), out(), std::nullopt, false, io_), cli::kMaxOuter);
  EXPECT_EQ(json::parse(slurp(fs::path(out()) / "result.json"))["status"], "max_outer");
}

TEST_F(Cli, MissingOrBrokenConfig) {
  EXPECT_EQ(cli::cmd_run((dir_ / "none.json").string(), out(), std::nullopt, false, io_), cli::kConfigError);
  const fs::path broken = dir_ / "broken.json";
  std::ofstream(broken) << "{ not json";
  EXPECT_EQ(cli::cmd_run(broken.string(), out(), std::nullopt, false, io_), cli::kConfigError);
}

TEST_F(Cli, CompareAgrees) {
  EXPECT_EQ(cli::cmd_compare(write(base()), out(), io_), cli::kOk);
  const json r = json::parse(slurp(fs::path(out()) / "compare.json"));
  EXPECT_TRUE(r["agree"].get<bool>());
  EXPECT_LE(r["max_distance"].get<double>(), 1e-6);
  EXPECT_TRUE(fs::exists(fs::path(out()) / "trace_flat.csv"));
}

TEST_F(Cli, CompareRejectsHyperbolic) {
  json j = base();
  j["manifold"] = {{"kind", "hyperboloid"}, {"dim", 2}};
  EXPECT_EQ(cli::cmd_compare(write(j), out(), io_), cli::kConfigError);
}

TEST_F(Cli, CompareRejectsSoftmax) {
  json j = base();
  j["inner"] = {{"method", "softmax"}};
  EXPECT_EQ(cli::cmd_compare(write(j), out(), io_), cli::kConfigError);
}

TEST_F(Cli, CheckSuites) {
  EXPECT_EQ(cli::cmd_check("geometry", 7, "", io_), cli::kOk);
  const json r = json::parse(o_.str());
  EXPECT_EQ(r["suite"], "geometry");
  EXPECT_EQ(cli::cmd_check("nonsense", 7, "", io_), cli::kConfigError);
  const std::string report = (dir_ / "report.json").string();
  EXPECT_EQ(cli::cmd_check("sharpness", 7, report, io_), cli::kOk);
  EXPECT_TRUE(fs::exists(report));
}

TEST(Mutation, WrongComparisonCoefficientIsCaught) {
  GeometryCheckOptions opts;
  opts.samples = 200;
  EXPECT_TRUE(check_geometry(7, opts).find("comparison_equality_euclidean").passed);
  opts.inner_coefficient = 1.0;
  const CheckReport bad = check_geometry(7, opts);
  EXPECT_FALSE(bad.find("comparison_equality_euclidean").passed);
  EXPECT_FALSE(bad.passed());
}

TEST_F(Cli, ArgumentParsing) {
  const std::string cfg = write(base());
  EXPECT_EQ(argv_main({"hadprox", "run", "--config", cfg, "--out", out(), "--seed", "3"}), cli::kOk);
  EXPECT_EQ(argv_main({"hadprox", "run"}), cli::kConfigError);
  EXPECT_EQ(argv_main({"hadprox", "frobnicate"}), cli::kConfigError);
  EXPECT_EQ(argv_main({"hadprox"}), cli::kConfigError);
  EXPECT_EQ(argv_main({"hadprox", "check", "--suite", "geometry", "--seed", "1"}), cli::kOk);
  EXPECT_EQ(argv_main({"hadprox", "check", "--suite", "bogus"}), cli::kConfigError);
}
