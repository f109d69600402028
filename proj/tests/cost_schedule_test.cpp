#include "reglab/cost_schedule.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "test_helpers.hpp"

namespace reglab {
namespace {

using testing::IntegratorSchedule;
using testing::ScalarSegment;
using testing::Vec;

TEST(CostSegmentTest, EvalLinearAndQuadratic) {
  CostSegment s = ScalarSegment(0, 1.0, -1.0, 1, 2.0, 3.0);
  EXPECT_DOUBLE_EQ(s.Eval(Vec({1.0}), Vec({4.0})), 2.0 * 3.0 + 3.0 * 2.0);
  EXPECT_DOUBLE_EQ(s.Eval(s.steady.eta, s.steady.theta), 0.0);
  s.p = 2;
  EXPECT_DOUBLE_EQ(s.Eval(Vec({1.0}), Vec({4.0})), 2.0 * 9.0 + 3.0 * 4.0);
  EXPECT_DOUBLE_EQ(EvalCost(s, Vec({1.0}), Vec({4.0})), s.Eval(Vec({1.0}), Vec({4.0})));
}

TEST(CostSegmentTest, VectorNormIsEuclidean) {
  CostSegment s;
  s.steady = {Vec({0.0, 0.0}), Vec({0.0, 0.0})};
  EXPECT_DOUBLE_EQ(s.Eval(Vec({0.0, 0.0}), Vec({3.0, 4.0})), 5.0);
}

TEST(CostSegmentTest, LipschitzConstants) {
  const CostSegment s1 = ScalarSegment(0, 0.0, 0.0, 1, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(LipschitzConstant(s1), 2.0 * std::sqrt(2.0));
  const CostSegment s2 = ScalarSegment(0, 0.0, 0.0, 2, 1.0, 1.0);
  EXPECT_THROW(LipschitzConstant(s2), BoundError);
  EXPECT_DOUBLE_EQ(LipschitzConstant(s2, 3.0), 6.0 * std::sqrt(2.0));
}

// |L(u, x) - L(u', x')| <= l ||(u, x) - (u', x')|| on random pairs in the ball.
TEST(CostSegmentTest, LipschitzConstantHoldsOnSamples) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int p : {1, 2}) {
    CostSegment s;
    s.steady = {Vec({0.3, -0.2}), Vec({1.0, 2.0})};
    s.p = p;
    s.q = 1.5;
    s.r = 0.7;
    const double radius = 2.0;
    const double l = LipschitzConstant(s, radius);
    auto sample = [&]() {
      Eigen::Vector4d z;
      do {
        for (int i = 0; i < 4; ++i) z(i) = radius * unit(rng);
      } while (z.norm() > radius);
      return z;
    };
    for (int i = 0; i < 10000; ++i) {
      const Eigen::Vector4d a = sample();
      const Eigen::Vector4d b = sample();
      auto eval = [&](const Eigen::Vector4d& z) {
        return s.Eval(s.steady.eta + z.head<2>(), s.steady.theta + z.tail<2>());
      };
      ASSERT_LE(std::abs(eval(a) - eval(b)), l * (a - b).norm() + 1e-12) << "p = " << p;
    }
  }
}

TEST(CostScheduleTest, RejectsMalformedSegments) {
  EXPECT_THROW(CostSchedule({}, 10), ScheduleError);
  EXPECT_THROW(CostSchedule({ScalarSegment(1, 0.0)}, 10), ScheduleError);
  EXPECT_THROW(IntegratorSchedule({0, 5, 5}, {0.0, 1.0, 2.0}, 10), ScheduleError);
  EXPECT_THROW(IntegratorSchedule({0, 11}, {0.0, 1.0}, 10), ScheduleError);
  EXPECT_THROW(CostSchedule({ScalarSegment(0, 0.0, 0.0, 3)}, 10), ScheduleError);
  EXPECT_THROW(CostSchedule({ScalarSegment(0, 0.0, 0.0, 1, 0.0)}, 10), ScheduleError);
  EXPECT_THROW(CostSchedule({ScalarSegment(0, 0.0)}, -1), ScheduleError);
}

TEST(CostScheduleTest, LookupAndMerging) {
  const CostSchedule sched = IntegratorSchedule({0, 4, 7, 9}, {0.0, 1.0, 1.0, 2.0}, 20);
  ASSERT_EQ(sched.size(), 3u);  // the segment at 7 repeats the one at 4
  EXPECT_EQ(sched.IndexAt(-3), 0u);
  EXPECT_EQ(sched.IndexAt(3), 0u);
  EXPECT_EQ(sched.IndexAt(4), 1u);
  EXPECT_EQ(sched.IndexAt(8), 1u);
  EXPECT_EQ(sched.IndexAt(20), 2u);
  EXPECT_TRUE(sched.IsConstantOn(4, 8));
  EXPECT_FALSE(sched.IsConstantOn(3, 4));
  EXPECT_EQ(sched.SteadyAt(10).theta(0), 2.0);

  const SwitchTimes sw = GetSwitchTimes(sched);
  EXPECT_EQ(sw.times, (std::vector<TimeIndex>{0, 4, 9}));
  EXPECT_EQ(sw.count, 3u);
  EXPECT_EQ(sw.end, 20);
  EXPECT_EQ(DwellCount(sched, 0, 20), 3);
  EXPECT_EQ(DwellCount(sched, 1, 8), 1);
  EXPECT_EQ(DwellCount(sched, 5, 8), 0);
}

TEST(CostScheduleTest, ValidateAgainstSystem) {
  const SystemModel lin = SystemModel::Linear(Matrix::Constant(1, 1, 0.5), Matrix::Ones(1, 1));
  EXPECT_NO_THROW(CostSchedule({ScalarSegment(0, 2.0, 1.0)}, 5).ValidateAgainst(lin));
  EXPECT_THROW(CostSchedule({ScalarSegment(0, 2.0, 0.0)}, 5).ValidateAgainst(lin), ScheduleError);
  EXPECT_THROW(CostSchedule({ScalarSegment(0, 0.0)}, 5).ValidateAgainst(SystemModel::Integrator(2)),
               ScheduleError);
}

TEST(DwellTest, InequalityIsStrict) {
  const DwellSpec spec{2, 2.0};
  EXPECT_TRUE(DwellInequalityHolds(2, 1, spec));
  EXPECT_FALSE(DwellInequalityHolds(3, 2, spec));
  EXPECT_TRUE(DwellInequalityHolds(3, 3, spec));
}

TEST(DwellTest, ChatterBoundBelowTwoRejectsEverySchedule) {
  // [0, 0] holds t_0 alone, and 1 < N0 + 0 needs N0 >= 2.
  const CostSchedule constant = CostSchedule::Constant(ScalarSegment(0, 0.0), 100);
  EXPECT_FALSE(CheckDwell(constant, DwellSpec{1, 100.0}).admissible);
  EXPECT_FALSE(CheckDwell(constant, DwellSpec{0, 1.0}).admissible);
  EXPECT_TRUE(CheckDwell(constant, DwellSpec{2, 100.0}).admissible);
}

TEST(DwellTest, ReportsWorstInterval) {
  // Three switches within two steps: [0, 2] has count 3 against 2 + 2/4.
  const DwellCheck check = CheckDwell({0, 1, 2, 50}, 60, DwellSpec{2, 4.0});
  EXPECT_FALSE(check.admissible);
  ASSERT_TRUE(check.violation.has_value());
  EXPECT_EQ(*check.violation, std::make_pair(TimeIndex{0}, TimeIndex{2}));
  EXPECT_THROW(CheckDwell({0, 3, 2}, 10, DwellSpec{2, 1.0}), ScheduleError);
  EXPECT_THROW(CheckDwell({0, 11}, 10, DwellSpec{2, 1.0}), ScheduleError);
  EXPECT_THROW(CheckDwell({0}, 10, DwellSpec{2, 0.0}), std::invalid_argument);
}

TEST(DwellTest, AgreesWithBruteForceOnRandomSchedules) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 400; ++trial) {
    const TimeIndex horizon = std::uniform_int_distribution<TimeIndex>(0, 40)(rng);
    const int n0 = std::uniform_int_distribution<int>(0, 4)(rng);
    const double phi = std::uniform_real_distribution<double>(0.3, 6.0)(rng);
    const double density = std::uniform_real_distribution<double>(0.0, 0.6)(rng);
    std::vector<TimeIndex> times{0};
    for (TimeIndex t = 1; t <= horizon; ++t) {
      if (std::bernoulli_distribution(density)(rng)) times.push_back(t);
    }
    const bool expected = testing::DwellBruteForce(times, horizon, n0, phi);
    ASSERT_EQ(CheckDwell(times, horizon, DwellSpec{n0, phi}).admissible, expected)
        << "trial " << trial;
  }
}

TEST(PathLengthTest, SumsSegmentJumps) {
  std::vector<CostSegment> segs = {ScalarSegment(0, 0.0, 1.0), ScalarSegment(3, 2.0, -1.0),
                                   ScalarSegment(8, -1.0, 0.0)};
  const CostSchedule sched(segs, 10);
  const PathLength pl = ComputePathLength(sched, 10);
  EXPECT_DOUBLE_EQ(pl.theta, 2.0 + 3.0);
  EXPECT_DOUBLE_EQ(pl.eta, 2.0 + 1.0);
  EXPECT_DOUBLE_EQ(pl.total(), 8.0);
  EXPECT_DOUBLE_EQ(ComputePathLength(sched, 7).theta, 2.0);
  EXPECT_DOUBLE_EQ(ComputePathLength(sched, 2).total(), 0.0);
}

// Splitting a segment into identical pieces, or the horizon into two parts,
// leaves the path length unchanged.
TEST(PathLengthTest, SplitInvariance) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<CostSegment> segs;
    std::vector<CostSegment> split;
    TimeIndex start = 0;
    for (int i = 0; i < 6; ++i) {
      const CostSegment s = ScalarSegment(start, normal(rng), normal(rng));
      segs.push_back(s);
      split.push_back(s);
      CostSegment copy = s;
      copy.start = start + 2;
      split.push_back(copy);
      start += 5;
    }
    const TimeIndex horizon = start;
    const PathLength a = ComputePathLength(CostSchedule(segs, horizon), horizon);
    const PathLength b = ComputePathLength(CostSchedule(split, horizon), horizon);
    EXPECT_EQ(a.theta, b.theta);
    EXPECT_EQ(a.eta, b.eta);

    // Per-step oracle on [0, T1] plus (T1, T].
    const CostSchedule sched(segs, horizon);
    const TimeIndex t1 = std::uniform_int_distribution<TimeIndex>(0, horizon)(rng);
    double head = 0.0;
    double tail = 0.0;
    for (TimeIndex t = 1; t <= horizon; ++t) {
      const double step = (sched.SteadyAt(t).theta - sched.SteadyAt(t - 1).theta).norm();
      (t <= t1 ? head : tail) += step;
    }
    EXPECT_NEAR(ComputePathLength(sched, t1).theta, head, 1e-12);
    EXPECT_NEAR(a.theta, head + tail, 1e-12);
  }
}

std::vector<SteadyStatePair> Pool() {
  return {{Vec({0.0}), Vec({0.0})}, {Vec({0.0}), Vec({1.0})}, {Vec({0.0}), Vec({-1.0})},
          {Vec({0.0}), Vec({2.0})}};
}

TEST(GeneratorTest, DeterministicInSeed) {
  const DwellSpec spec{2, 4.0};
  const auto a = GenerateAdmissibleSchedule(42, spec, 500, Pool(), {});
  const auto b = GenerateAdmissibleSchedule(42, spec, 500, Pool(), {});
  const auto c = GenerateAdmissibleSchedule(43, spec, 500, Pool(), {});
  EXPECT_EQ(GetSwitchTimes(a.schedule).times, GetSwitchTimes(b.schedule).times);
  ASSERT_EQ(a.schedule.size(), b.schedule.size());
  for (std::size_t i = 0; i < a.schedule.size(); ++i) {
    EXPECT_EQ(a.schedule.segments()[i].steady.theta, b.schedule.segments()[i].steady.theta);
  }
  EXPECT_NE(GetSwitchTimes(a.schedule).times, GetSwitchTimes(c.schedule).times);
}

TEST(GeneratorTest, OutputIsAdmissibleAndSwitches) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (const DwellSpec spec : {DwellSpec{2, 1.5}, DwellSpec{3, 4.0}, DwellSpec{2, 9.0}}) {
      const auto g = GenerateAdmissibleSchedule(seed, spec, 300, Pool(), CostParams{2, 1.0, 0.5});
      EXPECT_FALSE(g.degenerate);
      EXPECT_GT(g.schedule.size(), 5u);
      EXPECT_TRUE(CheckDwell(g.schedule, spec).admissible) << "seed " << seed;
      for (std::size_t i = 1; i < g.schedule.size(); ++i) {
        EXPECT_FALSE(g.schedule.segments()[i].SameCost(g.schedule.segments()[i - 1]));
      }
      EXPECT_EQ(g.schedule.segments()[0].p, 2);
    }
  }
}

TEST(GeneratorTest, DegenerateCasesAreFlagged) {
  const auto none = GenerateAdmissibleSchedule(1, DwellSpec{1, 2.0}, 100, Pool(), {});
  EXPECT_TRUE(none.degenerate);
  EXPECT_FALSE(none.note.empty());
  const auto short_horizon = GenerateAdmissibleSchedule(1, DwellSpec{2, 50.0}, 0, Pool(), {});
  EXPECT_TRUE(short_horizon.degenerate);
  const auto single = GenerateAdmissibleSchedule(1, DwellSpec{2, 2.0}, 100, {Pool()[1]}, {});
  EXPECT_FALSE(single.degenerate);
  EXPECT_EQ(single.schedule.size(), 1u);
  EXPECT_THROW(GenerateAdmissibleSchedule(1, DwellSpec{2, 2.0}, 10, {}, {}), std::invalid_argument);
}

}  // namespace
}  // namespace reglab
