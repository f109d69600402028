#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reglab/system_model.hpp"
#include "reglab/types.hpp"

namespace reglab {

/// Black-box stage cost with a user-declared minimizer and Lipschitz constant.
struct CustomCost {
  std::function<double(const Vector& u, const Vector& x)> eval;
  double lipschitz = std::numeric_limits<double>::infinity();
};

/// One piece of a piecewise-constant cost sequence.
///
/// The built-in family is L(u, x) = q ||x - theta||^p + r ||u - eta||^p with
/// p in {1, 2}; it is positive definite around (eta, theta) and vanishes there.
struct CostSegment {
  TimeIndex start = 0;
  SteadyStatePair steady;
  int p = 1;
  double q = 1.0;
  double r = 1.0;
  std::shared_ptr<const CustomCost> custom;

  double Eval(const Vector& u, const Vector& x) const;
  /// Same cost function (ignores start). Custom costs never compare equal.
  bool SameCost(const CostSegment& other) const;
};

/// L(u, x) for the segment. Free-function alias of CostSegment::Eval.
double EvalCost(const CostSegment& segment, const Vector& u, const Vector& x);

/// Conservative Lipschitz constant over the ball of the given radius around
/// (eta, theta): sqrt(2) max(q, r) for p = 1, 2 sqrt(2) max(q, r) radius for p = 2.
/// Throws BoundError for p = 2 with an infinite radius.
double LipschitzConstant(const CostSegment& segment,
                         double radius = std::numeric_limits<double>::infinity());

/// Piecewise-constant cost sequence on [0, horizon].
///
/// Segments are sorted by strictly increasing start, the first starts at 0 and
/// none starts after the horizon. Adjacent segments describing the same cost
/// are merged on construction.
class CostSchedule {
 public:
  CostSchedule(std::vector<CostSegment> segments, TimeIndex horizon);

  static CostSchedule Constant(CostSegment segment, TimeIndex horizon);

  TimeIndex horizon() const { return horizon_; }
  const std::vector<CostSegment>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }

  /// Index of the segment active at t. t < 0 maps to the first segment
  /// (zeta_t = zeta_0 for negative t).
  std::size_t IndexAt(TimeIndex t) const;
  const CostSegment& At(TimeIndex t) const { return segments_[IndexAt(t)]; }
  const SteadyStatePair& SteadyAt(TimeIndex t) const { return At(t).steady; }

  /// True when a single segment is active on all of [from, to].
  bool IsConstantOn(TimeIndex from, TimeIndex to) const;

  /// Throws ScheduleError when a segment's pair is not a steady state of the
  /// system or its dimensions disagree with it.
  void ValidateAgainst(const SystemModel& system, double tol = kSteadyStateTol) const;

 private:
  std::vector<CostSegment> segments_;
  TimeIndex horizon_;
};

struct SwitchTimes {
  std::vector<TimeIndex> times;  // t_0 = 0, ..., t_{N-1}
  std::size_t count = 0;         // N
  TimeIndex end = 0;             // t_N := T
};

SwitchTimes GetSwitchTimes(const CostSchedule& schedule);

/// Number of switch times t_i with tau1 <= t_i <= tau2; t_0 = 0 counts.
std::int64_t DwellCount(const CostSchedule& schedule, TimeIndex tau1, TimeIndex tau2);

/// Chatter bound N0 and average dwell time phi.
struct DwellSpec {
  int n0 = 0;
  double phi = 1.0;

  void Validate() const;
};

/// count < N0 + span / phi, the strict average-dwell-time inequality.
bool DwellInequalityHolds(std::int64_t count, std::int64_t span, const DwellSpec& spec);

struct DwellCheck {
  bool admissible = true;
  /// Violating interval [tau1, tau2] with the largest excess (ties: longest).
  std::optional<std::pair<TimeIndex, TimeIndex>> violation;
};

/// Checks the average-dwell-time inequality on every interval of [0, horizon].
/// Only intervals whose endpoints are switch times need to be examined.
DwellCheck CheckDwell(const std::vector<TimeIndex>& switch_times, TimeIndex horizon,
                      const DwellSpec& spec);
DwellCheck CheckDwell(const CostSchedule& schedule, const DwellSpec& spec);

struct PathLength {
  double eta = 0.0;
  double theta = 0.0;
  double total() const { return eta + theta; }
};

/// sum_{t=1}^{T} ||eta_t - eta_{t-1}|| + ||theta_t - theta_{t-1}||.
PathLength ComputePathLength(const CostSchedule& schedule, TimeIndex horizon);

struct CostParams {
  int p = 1;
  double q = 1.0;
  double r = 1.0;
};

struct GeneratedSchedule {
  CostSchedule schedule;
  /// Set when no switch could be placed although the pool asked for one, or
  /// when the dwell spec rejects even a single segment.
  bool degenerate = false;
  std::string note;
};

/// Random schedule that passes CheckDwell(., spec). Deterministic in `seed`.
GeneratedSchedule GenerateAdmissibleSchedule(std::uint64_t seed, const DwellSpec& spec,
                                             TimeIndex horizon,
                                             const std::vector<SteadyStatePair>& target_pool,
                                             const CostParams& params);

}  // namespace reglab
