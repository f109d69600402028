#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "reglab/controller.hpp"
#include "reglab/cost_schedule.hpp"
#include "reglab/rate_certificate.hpp"
#include "reglab/rollout.hpp"

namespace reglab {

/// L_t(u_t, x_t) - L_t(eta_t, theta_t), recomputed from the schedule.
double StepLoss(const Trajectory& traj, const CostSchedule& schedule, TimeIndex t);

/// sum_{t=0}^{T} L_t(u_t, x_t) - L_t(eta_t, theta_t).
/// Throws std::invalid_argument when the trajectory does not cover [0, T].
double DynamicRegret(const Trajectory& traj, const CostSchedule& schedule, TimeIndex horizon);

/// Truncated tail regret V_t = sum_{tau=t}^{T} loss_tau under a cost that is
/// constant on [t, T]. Accumulated backwards, so V_{t+1} - V_t + loss_t
/// vanishes up to a single rounding.
double LyapunovTail(const Trajectory& traj, const CostSchedule& schedule, TimeIndex t,
                    TimeIndex horizon);

/// V_0..V_{T+1} (V_{T+1} = 0) for a schedule constant on [0, T].
std::vector<double> LyapunovTailSeries(const Trajectory& traj, const CostSchedule& schedule,
                                       TimeIndex horizon);

/// 10 x (first t with sigma(t) < threshold), capped at `cap`.
TimeIndex LyapunovTruncationHorizon(const RateCertificate& cert, double threshold = 1e-8,
                                    TimeIndex cap = 1'000'000);

struct TrackingSums {
  double x = 0.0;  // sum_t ||x_t - theta_t||
  double u = 0.0;  // sum_t ||u_t - eta_t||
};

TrackingSums ComputeTrackingSums(const Trajectory& traj, const CostSchedule& schedule,
                                 TimeIndex horizon);

/// Near-minimal (k_u, k_zeta) for
///   ||u_t - eta_{t-1}|| <= k_u ||x_t - theta_{t-1}|| + k_zeta ||zeta_{t-1} - zeta_{t-2}||
/// with zeta_t = (theta_t, eta_t) and zeta_t = zeta_0 for t < 0. k_u is fitted on
/// steps whose zeta difference is zero, k_zeta then covers the rest. Each ratio is
/// discounted by the rounding floor of its subtractions, and steps whose state
/// distance is subnormal are held only to the zero-distance tolerance.
/// Throws AssumptionViolation when no finite k_u exists.
InputBoundConstants FitInputBound(const Trajectory& traj, const CostSchedule& schedule);

/// First step where the input bound fails for the given constants (relative
/// slack `tol`), or nullopt.
std::optional<TimeIndex> FindInputBoundViolation(const Trajectory& traj,
                                                 const CostSchedule& schedule,
                                                 const InputBoundConstants& constants,
                                                 double tol = 1e-12);

/// Empirical rate certificate from closed-loop runs under the constant cost
/// `segment`, one per initial state in the grid. The tabulated ratio
/// max ||x_t - theta|| / ||x_0 - theta|| is made nonincreasing from the tail and
/// normalized to sigma(0) = 1. When the table matches 1/t^2, 1/t or lambda^t
/// to 1e-9 relative, the analytic family is attached.
RateCertificate CertifyRate(const SystemModel& system, const Controller& controller,
                            const CostSegment& segment, const std::vector<Vector>& x0_grid,
                            int t_max, const PriorSpec& prior = {});

struct RateViolation {
  std::size_t grid_index = 0;
  TimeIndex t = 0;
};

/// Re-runs the grid and reports the first point where
/// ||x_t - theta|| > k sigma(t) ||x_0 - theta||, with relative slack 1e-12 and
/// a rounding floor that grows linearly in t.
std::optional<RateViolation> FindRateViolation(const SystemModel& system,
                                               const Controller& controller,
                                               const CostSegment& segment,
                                               const std::vector<Vector>& x0_grid,
                                               const RateCertificate& cert, int t_max,
                                               const PriorSpec& prior = {});

/// Sampled envelope phi(s, t) = max ||x_tau - theta|| over ||x_0 - theta|| <= s and
/// t <= tau <= t_max. A lower bound on the true supremum.
struct PhiEnvelope {
  std::vector<double> radii;               // sorted ascending
  std::vector<std::vector<double>> value;  // value[i][t] for radii[i]
};

/// Initial states: radii s j / grid_density (j = 1..grid_density) along every
/// direction in {-1, 0, 1}^n (n <= 3) or along +-e_i plus 8n seeded random
/// unit directions (n > 3).
PhiEnvelope ComputePhiEnvelope(const SystemModel& system, const Controller& controller,
                               const CostSegment& segment, std::vector<double> radii,
                               int grid_density, int t_max, const PriorSpec& prior = {},
                               std::uint64_t seed = 7);

enum class Summability { kBounded, kDiverging, kInconclusive };

std::string ToString(Summability s);

struct SummabilityOptions {
  double divergence_floor = 0.05;  // minimum growth per doubling
  double decay_ratio = 0.75;       // increments must shrink at least this fast
  double safety = 0.01;            // D = S(H_max) (1 + safety)
};

struct SummabilityVerdict {
  Summability verdict = Summability::kInconclusive;
  double bound = 0.0;  // D, meaningful for kBounded
  std::vector<TimeIndex> horizons;
  std::vector<double> partial_sums;
  double growth_per_doubling = 0.0;  // last increment S(2H) - S(H)
};

SummabilityVerdict ClassifySummability(const std::function<double(TimeIndex)>& partial_sum,
                                       const std::vector<TimeIndex>& horizons,
                                       const SummabilityOptions& options = {});

/// base, 2 base, ..., 2^(count-1) base.
std::vector<TimeIndex> DoublingHorizons(TimeIndex base, int count);

}  // namespace reglab
