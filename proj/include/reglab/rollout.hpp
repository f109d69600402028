#pragma once

#include <optional>
#include <vector>

#include "reglab/controller.hpp"
#include "reglab/cost_schedule.hpp"
#include "reglab/system_model.hpp"

namespace reglab {

/// Closed-loop record over [0, T].
///
/// x holds x_0..x_{T+1} (one state past the horizon), u holds u_0..u_T, and
/// loss_t = L_t(u_t, x_t) - L_t(eta_t, theta_t) with its running sum in
/// regret_cum.
struct Trajectory {
  TimeIndex horizon = 0;
  std::vector<Vector> x;
  std::vector<Vector> u;
  std::vector<double> loss;
  std::vector<double> regret_cum;
};

/// How the prior i_0 = (eta_{-1}, theta_{-1}) handed to the controller at t = 0
/// is chosen.
enum class PriorPolicy {
  /// theta_{-1} = x_0, eta_{-1} from the steady-state equation (zero if unsolvable).
  kHoldInitialState,
  /// (eta_{-1}, theta_{-1}) = (eta_0, theta_0), i.e. zeta_{-1} = zeta_0.
  kFirstSegment,
};

struct PriorSpec {
  PriorPolicy policy = PriorPolicy::kHoldInitialState;
  std::optional<SteadyStatePair> explicit_pair;

  static PriorSpec Policy(PriorPolicy p) { return PriorSpec{p, std::nullopt}; }
  static PriorSpec Explicit(SteadyStatePair pair) {
    return PriorSpec{PriorPolicy::kHoldInitialState, std::move(pair)};
  }
};

SteadyStatePair ResolvePrior(const SystemModel& system, const CostSchedule& schedule,
                             const Vector& x0, const PriorSpec& prior);

/// Runs the closed loop for t = 0..T. The controller is reset first; at time t
/// it sees x_t and the segment active at t - 1 (the prior at t = 0).
/// Controller failures and non-finite values raise RolloutError with the step.
Trajectory Rollout(const SystemModel& system, Controller& controller, const CostSchedule& schedule,
                   const Vector& x0, TimeIndex horizon, const PriorSpec& prior = {});

/// First t with step(x_t, u_t) != x_{t+1} (bitwise), or nullopt.
std::optional<TimeIndex> FindDynamicsMismatch(const SystemModel& system, const Trajectory& traj);

}  // namespace reglab
