#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "reglab/json_io.hpp"
#include "reglab/scenario.hpp"
#include "reglab/trace_io.hpp"
#include "test_helpers.hpp"

namespace reglab {
namespace {

using testing::IntegratorSchedule;
using testing::ScalarSegment;
using testing::Vec;

TEST(FormatDoubleTest, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::nextafter(1.0, 2.0), 0.0}) {
    EXPECT_EQ(std::strtod(FormatDouble(v).c_str(), nullptr), v);
  }
}

TEST(TraceTest, WriteReadRoundTrip) {
  const SystemModel sys = SystemModel::Linear(Matrix::Constant(2, 2, 0.1) + Matrix::Identity(2, 2) * 0.3,
                                              Matrix::Identity(2, 2));
  std::vector<CostSegment> segs(2);
  segs[0].steady.theta = Vec({1.0, -1.0});
  segs[0].steady.eta = *sys.SolveSteadyInput(segs[0].steady.theta);
  segs[1].start = 5;
  segs[1].steady.theta = Vec({0.25, 3.0});
  segs[1].steady.eta = *sys.SolveSteadyInput(segs[1].steady.theta);
  const CostSchedule sched(segs, 20);
  LinearFeedbackController ctrl(Matrix::Identity(2, 2) * -0.2, sys);
  const Trajectory traj = Rollout(sys, ctrl, sched, Vec({0.7, 1.0 / 3.0}), 20);

  std::stringstream ss;
  WriteTrace(ss, traj, sched);
  std::string header;
  std::getline(std::stringstream(ss.str()), header);
  EXPECT_EQ(header, "t,x[0],x[1],u[0],u[1],theta[0],theta[1],eta[0],eta[1],loss,regret_cum");

  const TraceData back = ReadTrace(ss);
  ASSERT_EQ(back.traj.horizon, 20);
  ASSERT_EQ(back.traj.x.size(), traj.x.size());
  for (std::size_t t = 0; t < traj.x.size(); ++t) EXPECT_EQ(back.traj.x[t], traj.x[t]);
  for (std::size_t t = 0; t < traj.u.size(); ++t) {
    EXPECT_EQ(back.traj.u[t], traj.u[t]);
    EXPECT_EQ(back.traj.loss[t], traj.loss[t]);
    EXPECT_EQ(back.traj.regret_cum[t], traj.regret_cum[t]);
    EXPECT_EQ(back.theta[t], sched.SteadyAt(static_cast<TimeIndex>(t)).theta);
    EXPECT_EQ(back.eta[t], sched.SteadyAt(static_cast<TimeIndex>(t)).eta);
  }
}

TEST(TraceTest, SubnormalCellsRoundTrip) {
  const CostSchedule sched = CostSchedule::Constant(ScalarSegment(0, 0.0), 3);
  Trajectory traj;
  traj.horizon = 3;
  const double tiny = std::numeric_limits<double>::denorm_min() * 12345.0;
  traj.x = {Vec({1.0}), Vec({tiny}), Vec({-tiny}), Vec({0.0}), Vec({0.0})};
  traj.u = {Vec({tiny}), Vec({0.0}), Vec({0.0}), Vec({0.0})};
  traj.loss = {1.0, tiny, tiny, 0.0};
  traj.regret_cum = {1.0, 1.0, 1.0, 1.0};
  std::stringstream ss;
  WriteTrace(ss, traj, sched);
  const TraceData back = ReadTrace(ss);
  EXPECT_EQ(back.traj.x[1](0), tiny);
  EXPECT_EQ(back.traj.x[2](0), -tiny);
  EXPECT_EQ(back.traj.u[0](0), tiny);

  std::stringstream overflow("t,x[0],u[0],theta[0],eta[0],loss,regret_cum\n0,1e999,0,0,0,1,1\n");
  EXPECT_THROW(ReadTrace(overflow), std::runtime_error);
}

TEST(TraceTest, MalformedInputReportsLine) {
  std::stringstream ss("t,x[0],u[0],theta[0],eta[0],loss,regret_cum\n0,1,0,0,0,1,1\n1,abc,0,0,0,1,2\n");
  try {
    ReadTrace(ss);
    FAIL() << "expected runtime_error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  std::stringstream bad_header("t,y\n");
  EXPECT_THROW(ReadTrace(bad_header), std::runtime_error);
}

TEST(ScheduleJsonTest, RoundTrip) {
  std::vector<CostSegment> segs = {ScalarSegment(0, 1.0), ScalarSegment(4, -0.5, 0.0, 2, 3.0, 0.5),
                                   ScalarSegment(9, 0.1)};
  const CostSchedule sched(segs, 30);
  const Json j = ScheduleToJson(sched);
  const CostSchedule back = ScheduleFromJson(j, nullptr, "");
  ASSERT_EQ(back.size(), sched.size());
  EXPECT_EQ(back.horizon(), 30);
  for (std::size_t i = 0; i < sched.size(); ++i) {
    EXPECT_TRUE(back.segments()[i].SameCost(sched.segments()[i]));
    EXPECT_EQ(back.segments()[i].start, sched.segments()[i].start);
  }
  EXPECT_EQ(ScheduleToJson(back).dump(), j.dump());
}

TEST(ScheduleJsonTest, ErrorsCarryPointers) {
  const SystemModel sys = SystemModel::Integrator(1);
  auto path_of = [&](const Json& j) -> std::string {
    try {
      ScheduleFromJson(j, &sys, "/schedule", 10);
    } catch (const ConfigError& e) {
      return e.path();
    }
    return "<no error>";
  };
  EXPECT_EQ(path_of(Json::parse(R"({"segments": []})")), "/schedule/segments");
  EXPECT_EQ(path_of(Json::parse(R"({"segments": [{"start": 0, "theta": [1], "eta": [0]},
                                                  {"start": 0, "theta": [2], "eta": [0]}]})")),
            "/schedule/segments/1/start");
  EXPECT_EQ(path_of(Json::parse(R"({"segments": [{"start": 0, "theta": [1, 2], "eta": [0]}]})")),
            "/schedule/segments/0/theta");
  EXPECT_EQ(path_of(Json::parse(R"({"segments": [{"start": 0, "theta": [1], "eta": [0.5]}]})")),
            "/schedule/segments/0");
  EXPECT_EQ(path_of(Json::parse(R"({"segments": [{"start": 0, "theta": [1], "eta": "solve", "p": 3}]})")),
            "/schedule/segments/0/p");
  EXPECT_EQ(path_of(Json::parse(R"({"segments": [{"start": 0, "theta": "x"}]})")),
            "/schedule/segments/0/theta");
}

Json BaseConfig() {
  return Json::parse(R"({
    "name": "io",
    "system": {"kind": "integrator", "dim": 1},
    "controller": "example1-improved",
    "x0": [1.0],
    "horizon": 50,
    "schedule": {"segments": [{"start": 0, "theta": [0.0], "eta": [0.0]},
                              {"start": 20, "theta": [1.0], "eta": "solve"}]}
  })");
}

std::string ErrorPath(const Json& config) {
  try {
    ParseScenario(config, false);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

TEST(ConfigTest, ValidConfigParses) {
  const Scenario sc = ParseScenario(BaseConfig(), false);
  EXPECT_EQ(sc.name, "io");
  EXPECT_EQ(sc.horizon, 50);
  EXPECT_EQ(sc.schedule.size(), 2u);
  EXPECT_EQ(sc.controller->info().name, "example1-improved");
  EXPECT_TRUE(sc.analysis.certify.has_value());
  EXPECT_FALSE(sc.analysis.bounds.has_value());
}

TEST(ConfigTest, ErrorsCarryPointers) {
  Json c = BaseConfig();
  c["x0"] = "one";
  EXPECT_EQ(ErrorPath(c), "/x0");

  c = BaseConfig();
  c["x0"] = {1.0, 2.0};
  EXPECT_EQ(ErrorPath(c), "/x0");

  c = BaseConfig();
  c.erase("horizon");
  EXPECT_EQ(ErrorPath(c), "/horizon");

  c = BaseConfig();
  c["bogus"] = 1;
  EXPECT_EQ(ErrorPath(c), "/bogus");

  c = BaseConfig();
  c["system"]["kind"] = "pendulum";
  EXPECT_EQ(ErrorPath(c), "/system/kind");

  c = BaseConfig();
  c["system"] = {{"kind", "linear"}, {"A", {{1.0, 0.0}}}, {"B", {{1.0}}}};
  EXPECT_EQ(ErrorPath(c), "/system/A");

  c = BaseConfig();
  c["controller"] = {{"kind", "linear-feedback"}, {"K", {{1.0, 2.0}}}};
  EXPECT_EQ(ErrorPath(c), "/controller/K");

  c = BaseConfig();
  c["controller"] = "mpc";
  EXPECT_EQ(ErrorPath(c), "/controller");

  c = BaseConfig();
  c["schedule"]["segments"][1]["theta"] = {1.0, 2.0};
  EXPECT_EQ(ErrorPath(c), "/schedule/segments/1/theta");

  c = BaseConfig();
  c["analysis"] = {{"bounds", {{"phi", 2.0}}}};
  EXPECT_EQ(ErrorPath(c), "/analysis/bounds");

  c = BaseConfig();
  c["analysis"] = {{"bounds", {{"n0", 9}, {"phi", 2.0}}}};
  EXPECT_EQ(ErrorPath(c), "/analysis/bounds/n0");

  c = BaseConfig();
  c["analysis"] = {{"summability", {{"count", 2}}}};
  EXPECT_EQ(ErrorPath(c), "/analysis/summability/count");

  c = BaseConfig();
  c["analysis"] = {{"certify", {{"grid", {{1.0, 2.0}}}}}};
  EXPECT_EQ(ErrorPath(c), "/analysis/certify/grid/0");

  c = BaseConfig();
  c["schedule"] = {{"generator", {{"seed", 1}, {"n0", 2}, {"phi", -1.0}, {"targets", {{{"theta", {0.0}}}}}}}};
  EXPECT_EQ(ErrorPath(c), "/schedule/generator/phi");

  c = BaseConfig();
  c["outputs"] = {{"csv", "x"}};
  EXPECT_EQ(ErrorPath(c), "/outputs/csv");

  c = BaseConfig();
  c["prior"] = "guess";
  EXPECT_EQ(ErrorPath(c), "/prior");

  EXPECT_EQ(ErrorPath(Json::array()), "");
}

TEST(ConfigTest, EnvironmentSeedOverridesGenerator) {
  Json c = BaseConfig();
  c["schedule"] = {{"generator",
                    {{"seed", 3},
                     {"n0", 2},
                     {"phi", 3.0},
                     {"targets", {{{"theta", {0.0}}}, {{"theta", {1.0}}}, {{"theta", {-1.0}}}}}}}};
  ::setenv("REGLAB_SEED", "77", 1);
  const Scenario with_env = ParseScenario(c, true);
  const Scenario pinned = ParseScenario(c, false);
  ::unsetenv("REGLAB_SEED");
  ASSERT_TRUE(with_env.seed && pinned.seed);
  EXPECT_EQ(*with_env.seed, 77u);
  EXPECT_EQ(*pinned.seed, 3u);
  EXPECT_EQ(with_env.config["schedule"]["generator"]["seed"], 77);
  ::setenv("REGLAB_SEED", "abc", 1);
  EXPECT_THROW(ParseScenario(c, true), ConfigError);
  ::unsetenv("REGLAB_SEED");
}

TEST(JsonTest, ReportSerialization) {
  const Json cert = ToJson(RateCertificate::Geometric(2.0, 0.25));
  EXPECT_EQ(cert["k"], 2.0);
  EXPECT_EQ(cert["lambda"], 0.25);
  const Json pl = ToJson(PathLength{1.5, 2.5});
  EXPECT_EQ(pl["eta"], 1.5);
  EXPECT_EQ(pl["theta"], 2.5);
  EXPECT_EQ(VectorToJson(Vec({1.0, 2.0})), Json::parse("[1.0, 2.0]"));
  Matrix m(2, 2);
  m << 1, 2, 3, 4;
  EXPECT_EQ(cfg::ParseMatrix(MatrixToJson(m), ""), m);
  EXPECT_EQ(cfg::ParseVector(Json(3.0), "")(0), 3.0);
  const SystemModel lin = SystemModel::Linear(m, Matrix::Ones(2, 1));
  const SystemModel back = SystemFromJson(SystemToJson(lin));
  EXPECT_EQ(back.A(), lin.A());
  EXPECT_EQ(back.B(), lin.B());
}

}  // namespace
}  // namespace reglab
