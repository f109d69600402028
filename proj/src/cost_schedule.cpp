#include "reglab/cost_schedule.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace reglab {

namespace {

double PowNorm(double norm, int p) { return p == 1 ? norm : norm * norm; }

bool SameVector(const Vector& a, const Vector& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

}  // namespace

double CostSegment::Eval(const Vector& u, const Vector& x) const {
  if (custom) return custom->eval(u, x);
  ExpectSize("x", steady.theta.size(), x.size());
  ExpectSize("u", steady.eta.size(), u.size());
  return q * PowNorm((x - steady.theta).norm(), p) + r * PowNorm((u - steady.eta).norm(), p);
}

bool CostSegment::SameCost(const CostSegment& other) const {
  if (custom || other.custom) return false;
  return p == other.p && q == other.q && r == other.r &&
         SameVector(steady.eta, other.steady.eta) && SameVector(steady.theta, other.steady.theta);
}

double EvalCost(const CostSegment& segment, const Vector& u, const Vector& x) {
  return segment.Eval(u, x);
}

double LipschitzConstant(const CostSegment& segment, double radius) {
  if (segment.custom) return segment.custom->lipschitz;
  const double weight = std::max(segment.q, segment.r);
  if (segment.p == 1) return std::sqrt(2.0) * weight;
  if (!std::isfinite(radius)) {
    throw BoundError("Lipschitz constant is region-dependent for quadratic costs");
  }
  if (radius <= 0.0) throw BoundError("Lipschitz radius must be positive");
  return 2.0 * std::sqrt(2.0) * weight * radius;
}

CostSchedule::CostSchedule(std::vector<CostSegment> segments, TimeIndex horizon)
    : horizon_(horizon) {
  if (horizon < 0) throw ScheduleError("schedule horizon must be nonnegative");
  if (segments.empty()) throw ScheduleError("schedule needs at least one segment");
  if (segments.front().start != 0) throw ScheduleError("first segment must start at t=0");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const CostSegment& s = segments[i];
    if (!s.custom) {
      if (s.p != 1 && s.p != 2) {
        throw ScheduleError("segment " + std::to_string(i) + ": p must be 1 or 2");
      }
      if (!(s.q > 0.0) || !(s.r > 0.0)) {
        throw ScheduleError("segment " + std::to_string(i) + ": weights q, r must be positive");
      }
    }
    if (i > 0 && s.start <= segments[i - 1].start) {
      throw ScheduleError("segment " + std::to_string(i) + ": start times must strictly increase");
    }
    if (s.start > horizon) {
      throw ScheduleError("segment " + std::to_string(i) + " starts after the horizon");
    }
  }
  segments_.reserve(segments.size());
  for (auto& s : segments) {
    if (!segments_.empty() && segments_.back().SameCost(s)) continue;
    segments_.push_back(std::move(s));
  }
}

CostSchedule CostSchedule::Constant(CostSegment segment, TimeIndex horizon) {
  segment.start = 0;
  return CostSchedule({std::move(segment)}, horizon);
}

std::size_t CostSchedule::IndexAt(TimeIndex t) const {
  if (t <= 0) return 0;
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](TimeIndex v, const CostSegment& s) { return v < s.start; });
  return static_cast<std::size_t>(std::distance(segments_.begin(), it)) - 1;
}

bool CostSchedule::IsConstantOn(TimeIndex from, TimeIndex to) const {
  return IndexAt(from) == IndexAt(to);
}

void CostSchedule::ValidateAgainst(const SystemModel& system, double tol) const {
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    const std::string where = "segment " + std::to_string(i);
    if (s.steady.theta.size() != system.state_dim()) {
      throw ScheduleError(where + ": theta has dimension " + std::to_string(s.steady.theta.size()) +
                          ", system expects " + std::to_string(system.state_dim()));
    }
    if (s.steady.eta.size() != system.input_dim()) {
      throw ScheduleError(where + ": eta has dimension " + std::to_string(s.steady.eta.size()) +
                          ", system expects " + std::to_string(system.input_dim()));
    }
    if (!ValidateSteadyState(system, s.steady, tol)) {
      throw ScheduleError(where + ": (eta, theta) is not a steady state of the system");
    }
  }
}

SwitchTimes GetSwitchTimes(const CostSchedule& schedule) {
  SwitchTimes out;
  out.times.reserve(schedule.size());
  for (const auto& s : schedule.segments()) out.times.push_back(s.start);
  out.count = out.times.size();
  out.end = schedule.horizon();
  return out;
}

std::int64_t DwellCount(const CostSchedule& schedule, TimeIndex tau1, TimeIndex tau2) {
  if (tau1 > tau2) throw std::invalid_argument("DwellCount: tau1 > tau2");
  std::int64_t n = 0;
  for (const auto& s : schedule.segments()) {
    if (s.start >= tau1 && s.start <= tau2) ++n;
  }
  return n;
}

void DwellSpec::Validate() const {
  if (n0 < 0) throw std::invalid_argument("N0 must be nonnegative");
  if (!(phi > 0.0) || !std::isfinite(phi)) throw std::invalid_argument("phi must be positive");
}

bool DwellInequalityHolds(std::int64_t count, std::int64_t span, const DwellSpec& spec) {
  return static_cast<double>(count) <
         static_cast<double>(spec.n0) + static_cast<double>(span) / spec.phi;
}

DwellCheck CheckDwell(const std::vector<TimeIndex>& switch_times, TimeIndex horizon,
                      const DwellSpec& spec) {
  spec.Validate();
  for (std::size_t i = 0; i < switch_times.size(); ++i) {
    if (switch_times[i] < 0 || switch_times[i] > horizon ||
        (i > 0 && switch_times[i] <= switch_times[i - 1])) {
      throw ScheduleError("switch times must increase strictly within [0, horizon]");
    }
  }
  DwellCheck result;
  double worst_excess = -1.0;
  TimeIndex worst_span = -1;
  const std::size_t n = switch_times.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      const auto count = static_cast<std::int64_t>(b - a + 1);
      const TimeIndex span = switch_times[b] - switch_times[a];
      if (DwellInequalityHolds(count, span, spec)) continue;
      result.admissible = false;
      const double excess = static_cast<double>(count) -
                            (static_cast<double>(spec.n0) + static_cast<double>(span) / spec.phi);
      if (excess > worst_excess || (excess == worst_excess && span > worst_span)) {
        worst_excess = excess;
        worst_span = span;
        result.violation = std::make_pair(switch_times[a], switch_times[b]);
      }
    }
  }
  // An interval holding no switch fails only as a point interval with N0 = 0, and
  // then [t_0, t_0] has already failed. Any other interval is dominated by the
  // tightest interval between the switch times it contains.
  return result;
}

DwellCheck CheckDwell(const CostSchedule& schedule, const DwellSpec& spec) {
  return CheckDwell(GetSwitchTimes(schedule).times, schedule.horizon(), spec);
}

PathLength ComputePathLength(const CostSchedule& schedule, TimeIndex horizon) {
  PathLength pl;
  const auto& segs = schedule.segments();
  for (std::size_t i = 1; i < segs.size() && segs[i].start <= horizon; ++i) {
    pl.eta += (segs[i].steady.eta - segs[i - 1].steady.eta).norm();
    pl.theta += (segs[i].steady.theta - segs[i - 1].steady.theta).norm();
  }
  return pl;
}

GeneratedSchedule GenerateAdmissibleSchedule(std::uint64_t seed, const DwellSpec& spec,
                                             TimeIndex horizon,
                                             const std::vector<SteadyStatePair>& target_pool,
                                             const CostParams& params) {
  spec.Validate();
  if (target_pool.empty()) throw std::invalid_argument("target pool must not be empty");
  if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");

  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t exclude) {
    if (target_pool.size() == 1) return std::size_t{0};
    std::uniform_int_distribution<std::size_t> dist(0, target_pool.size() - 2);
    std::size_t k = dist(rng);
    return k >= exclude ? k + 1 : k;
  };
  auto make_segment = [&](TimeIndex start, std::size_t target) {
    CostSegment s;
    s.start = start;
    s.steady = target_pool[target];
    s.p = params.p;
    s.q = params.q;
    s.r = params.r;
    return s;
  };

  std::vector<CostSegment> segments;
  std::vector<TimeIndex> times{0};
  std::size_t current = std::uniform_int_distribution<std::size_t>(0, target_pool.size() - 1)(rng);
  segments.push_back(make_segment(0, current));

  // A point interval [t_i, t_i] holds one switch, so N0 < 2 rejects every schedule.
  const bool single_point_ok = DwellInequalityHolds(1, 0, spec);
  if (single_point_ok && target_pool.size() > 1) {
    const auto max_gap = static_cast<TimeIndex>(std::ceil(2.0 * spec.phi)) + 1;
    std::uniform_int_distribution<TimeIndex> gap_dist(1, std::max<TimeIndex>(1, max_gap));
    auto fits = [&](TimeIndex candidate) {
      for (std::size_t a = 0; a < times.size(); ++a) {
        const auto count = static_cast<std::int64_t>(times.size() - a + 1);
        if (!DwellInequalityHolds(count, candidate - times[a], spec)) return false;
      }
      return true;
    };
    while (true) {
      TimeIndex candidate = times.back() + gap_dist(rng);
      while (candidate <= horizon && !fits(candidate)) ++candidate;
      if (candidate > horizon) break;
      times.push_back(candidate);
      current = pick(current);
      segments.push_back(make_segment(candidate, current));
    }
  }

  GeneratedSchedule out{CostSchedule(std::move(segments), horizon), false, {}};
  if (!single_point_ok) {
    out.degenerate = true;
    out.note = "dwell spec admits no schedule (N0 < 2 fails on a single switch instant)";
  } else if (target_pool.size() > 1 && out.schedule.size() == 1) {
    out.degenerate = true;
    out.note = "no switch fits the dwell spec within the horizon";
  }
  return out;
}

}  // namespace reglab
