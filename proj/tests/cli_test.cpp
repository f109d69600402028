// Exit codes and outputs of the command-line tool.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "reglab/json_io.hpp"

namespace reglab {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("reglab_cli_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the tool with stdout and stderr captured to files; returns the exit code.
  int Run(const std::string& args) {
    const std::string cmd = std::string(REGLAB_CLI_PATH) + " " + args + " >" + Path("stdout") +
                            " 2>" + Path("stderr");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  std::string Read(const std::string& name) const {
    std::ifstream is(dir_ / name);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
  }

  std::string Write(const std::string& name, const Json& j) const {
    std::ofstream os(dir_ / name);
    os << j.dump(2);
    return Path(name);
  }

  fs::path dir_;
};

Json Config() {
  return Json::parse(R"({
    "name": "cli",
    "system": {"kind": "integrator", "dim": 1},
    "controller": "example1-improved",
    "x0": [1.0],
    "horizon": 200,
    "schedule": {"segments": [{"start": 0, "theta": [0.0], "eta": [0.0]},
                              {"start": 60, "theta": [2.0], "eta": [0.0]}]},
    "analysis": {"bounds": {"n0": 2, "phi": 4.0}}
  })");
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Run(""), 2);
  EXPECT_EQ(Run("frobnicate"), 2);
  EXPECT_EQ(Run("simulate " + Path("missing.json")), 2);
  EXPECT_EQ(Run("--help"), 0);
}

TEST_F(CliTest, SimulateWritesTraceAndReport) {
  const std::string cfg = Write("c.json", Config());
  EXPECT_EQ(Run("simulate " + cfg + " --trace " + Path("t.csv") + " --report " + Path("r.json")), 0)
      << Read("stderr");
  EXPECT_TRUE(fs::exists(dir_ / "t.csv"));
  const Json report = Json::parse(Read("r.json"));
  EXPECT_TRUE(report["passed"].get<bool>());
  EXPECT_EQ(Json::parse(Read("stdout")), report);

  EXPECT_EQ(Run("analyze " + cfg + " --trace " + Path("t.csv") + " --report " + Path("r2.json")), 0);
  EXPECT_EQ(Read("r.json"), Read("r2.json"));
}

TEST_F(CliTest, ConfigErrorNamesThePointer) {
  Json c = Config();
  c["schedule"]["segments"][1]["theta"] = "two";
  EXPECT_EQ(Run("simulate " + Write("c.json", c)), 2);
  EXPECT_NE(Read("stderr").find("/schedule/segments/1/theta"), std::string::npos) << Read("stderr");

  EXPECT_EQ(Run("simulate " + Write("bad.json", Json("not an object"))), 2);
  std::ofstream(dir_ / "broken.json") << "{";
  EXPECT_EQ(Run("simulate " + Path("broken.json")), 2);
}

TEST_F(CliTest, FailedChecksExitOne) {
  Json c = Config();
  c["controller"] = "example1-baseline";
  EXPECT_EQ(Run("simulate " + Write("c.json", c)), 1);
  EXPECT_NE(Read("stderr").find("FAILED"), std::string::npos);
}

TEST_F(CliTest, RuntimeErrorExitsThree) {
  Json c = Config();
  c["system"] = {{"kind", "linear"}, {"A", {{2.0}}}, {"B", {{1.0}}}};
  c["controller"] = {{"kind", "linear-feedback"}, {"K", {{0.0}}}};
  c["prior"] = "first-segment";
  c["horizon"] = 2000;
  c["schedule"] = {{"segments", {{{"start", 0}, {"theta", {0.0}}, {"eta", {0.0}}}}}};
  c["analysis"] = {{"certify", false}};
  EXPECT_EQ(Run("simulate " + Write("c.json", c)), 3);
  EXPECT_NE(Read("stderr").find("step 1023"), std::string::npos) << Read("stderr");
}

TEST_F(CliTest, DwellCheck) {
  const Json sched = Json::parse(R"({"horizon": 20, "segments": [
      {"start": 0, "theta": [0], "eta": [0]}, {"start": 1, "theta": [1], "eta": [0]},
      {"start": 2, "theta": [0], "eta": [0]}]})");
  const std::string path = Write("s.json", sched);
  EXPECT_EQ(Run("dwell-check " + path + " --n0 2 --phi 2"), 1);
  EXPECT_FALSE(Json::parse(Read("stdout"))["admissible"].get<bool>());
  EXPECT_EQ(Run("dwell-check " + path + " --n0 3 --phi 2"), 0);
  EXPECT_EQ(Json::parse(Read("stdout"))["switch_times"], Json::parse("[0, 1, 2]"));
  EXPECT_EQ(Run("dwell-check " + Write("c.json", Config()) + " --n0 2 --phi 4"), 0);
  EXPECT_EQ(Run("dwell-check " + path + " --n0 2 --phi 0"), 2);
}

TEST_F(CliTest, VerifyBounds) {
  Json c = Config();
  c["analysis"].erase("bounds");
  const std::string cfg = Write("c.json", c);
  EXPECT_EQ(Run("verify-bounds " + cfg + " --n0 2 --phi 4"), 0) << Read("stderr");
  const Json out = Json::parse(Read("stdout"));
  EXPECT_LE(out["regret"].get<double>(), out["bounds"]["report"]["total"].get<double>());
  EXPECT_EQ(Run("verify-bounds " + cfg), 2);  // no dwell parameters anywhere
}

TEST_F(CliTest, SweepAndReproduce) {
  const std::string cfg = Write("c.json", Config());
  EXPECT_EQ(Run("sweep " + cfg + " --axis /analysis/bounds/phi --values 4,8 --out " + Path("s.csv")), 0)
      << Read("stderr");
  std::istringstream csv(Read("s.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "value,regret,bound,margin,status");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 2);
  EXPECT_EQ(Run("sweep " + cfg + " --axis /missing/key --values 1"), 2);

  EXPECT_EQ(Run("reproduce example2 --seeds 1 --out-dir " + Path("rep")), 0) << Read("stderr");
  EXPECT_TRUE(fs::exists(dir_ / "rep" / "example2-seed1.trace.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "rep" / "example2-constant.report.json"));
  EXPECT_EQ(Run("reproduce example9"), 2);
}

}  // namespace
}  // namespace reglab
