#include "reglab/rollout.hpp"

#include <exception>

namespace reglab {

SteadyStatePair ResolvePrior(const SystemModel& system, const CostSchedule& schedule,
                             const Vector& x0, const PriorSpec& prior) {
  if (prior.explicit_pair) {
    ExpectSize("prior.theta", system.state_dim(), prior.explicit_pair->theta.size());
    ExpectSize("prior.eta", system.input_dim(), prior.explicit_pair->eta.size());
    return *prior.explicit_pair;
  }
  if (prior.policy == PriorPolicy::kFirstSegment) return schedule.SteadyAt(0);
  SteadyStatePair pair;
  pair.theta = x0;
  if (auto eta = system.SolveSteadyInput(x0)) {
    pair.eta = *eta;
  } else {
    pair.eta = Vector::Zero(system.input_dim());
  }
  return pair;
}

Trajectory Rollout(const SystemModel& system, Controller& controller, const CostSchedule& schedule,
                   const Vector& x0, TimeIndex horizon, const PriorSpec& prior) {
  if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
  if (horizon > schedule.horizon()) {
    throw ScheduleError("schedule covers [0, " + std::to_string(schedule.horizon()) +
                        "] but the rollout needs [0, " + std::to_string(horizon) + "]");
  }
  ExpectSize("x0", system.state_dim(), x0.size());

  const auto steps = static_cast<std::size_t>(horizon) + 1;
  Trajectory traj;
  traj.horizon = horizon;
  traj.x.reserve(steps + 1);
  traj.u.reserve(steps);
  traj.loss.reserve(steps);
  traj.regret_cum.reserve(steps);
  traj.x.push_back(x0);

  controller.Reset();
  RevealedCost revealed;
  revealed.segment_id = kPriorSegmentId;
  revealed.steady = ResolvePrior(system, schedule, x0, prior);

  double regret = 0.0;
  for (TimeIndex t = 0; t <= horizon; ++t) {
    if (t > 0) {
      const CostSegment& prev = schedule.At(t - 1);
      revealed.segment_id = prev.start;
      revealed.steady = prev.steady;
      revealed.segment = &prev;
    }
    const Vector& x = traj.x.back();
    Vector u;
    try {
      u = controller.Act(x, revealed);
    } catch (const std::exception& e) {
      throw RolloutError(t, std::string("controller failed: ") + e.what());
    }
    if (u.size() != system.input_dim()) {
      throw RolloutError(t, "controller returned an input of dimension " + std::to_string(u.size()));
    }
    if (!u.allFinite()) throw RolloutError(t, "controller returned a non-finite input");
    Vector next = system.Step(x, u);
    if (!next.allFinite()) throw RolloutError(t, "state became non-finite");

    const CostSegment& seg = schedule.At(t);
    const double loss = seg.Eval(u, x) - seg.Eval(seg.steady.eta, seg.steady.theta);
    regret += loss;
    traj.u.push_back(std::move(u));
    traj.loss.push_back(loss);
    traj.regret_cum.push_back(regret);
    traj.x.push_back(std::move(next));
  }
  return traj;
}

std::optional<TimeIndex> FindDynamicsMismatch(const SystemModel& system, const Trajectory& traj) {
  for (std::size_t t = 0; t < traj.u.size(); ++t) {
    if (t + 1 >= traj.x.size()) return static_cast<TimeIndex>(t);
    const Vector next = system.Step(traj.x[t], traj.u[t]);
    if (!(next.array() == traj.x[t + 1].array()).all()) return static_cast<TimeIndex>(t);
  }
  return std::nullopt;
}

}  // namespace reglab
