#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "reglab/cost_schedule.hpp"
#include "reglab/rate_certificate.hpp"
#include "reglab/system_model.hpp"
#include "reglab/types.hpp"

namespace reglab {

/// Segment id handed to a controller at t = 0, before any cost is revealed.
inline constexpr TimeIndex kPriorSegmentId = -1;

/// What the controller learns at time t: the cost active at t - 1 (or the prior
/// at t = 0), identified by its segment start time.
struct RevealedCost {
  TimeIndex segment_id = kPriorSegmentId;
  SteadyStatePair steady;
  const CostSegment* segment = nullptr;  // null for the prior
};

struct InputBoundConstants {
  double k_u = 0.0;
  double k_zeta = 0.0;
};

struct ControllerInfo {
  std::string name;
  /// Declared convergence certificate under a constant cost, when known.
  std::optional<RateCertificate> rate;
  /// Declared constants of the input bound, when known.
  std::optional<InputBoundConstants> input_bound;
  /// Set when closed-loop stability is not guaranteed (e.g. rho(A + BK) >= 1).
  std::optional<std::string> warning;
};

/// Causal control algorithm in state-space form:
///   x^A_{t+1} = f^A_{L_{t-1}}(x^A_t, x_t),  u_t = h^A_{L_{t-1}}(x^A_t, x_t).
///
/// `Act` evaluates h^A and advances the internal state in one call. A rollout
/// calls it exactly once per time step.
class Controller {
 public:
  virtual ~Controller() = default;

  /// Returns the controller to its initial internal state x^A_0.
  virtual void Reset() = 0;
  virtual Vector Act(const Vector& x, const RevealedCost& revealed) = 0;
  virtual std::unique_ptr<Controller> Clone() const = 0;
  virtual const ControllerInfo& info() const = 0;
};

/// Counts steps since the revealed cost last changed.
///
/// tau = 0 on the first observation (t = 0), resets to 1 whenever a different
/// segment is revealed and increments by one otherwise.
class TauCounter {
 public:
  void Observe(TimeIndex segment_id);
  void Reset() { started_ = false; tau_ = 0; last_seen_ = kPriorSegmentId; }

  TimeIndex tau() const { return tau_; }
  TimeIndex last_seen() const { return last_seen_; }

 private:
  bool started_ = false;
  TimeIndex tau_ = 0;
  TimeIndex last_seen_ = kPriorSegmentId;
};

/// u_t = -g(tau) x_t + g(tau) theta_{t-1} with a gain that decays with the time
/// since the last revealed change. Requires n = m.
///
///   kHarmonic:  g = 1/(tau+1)              gives ||x_t - theta|| = ||x_0 - theta|| / t
///   kQuadratic: g = (2 tau + 1)/(tau+1)^2  gives ||x_t - theta|| = ||x_0 - theta|| / t^2
/// on the integrator under a constant cost.
class ResettingGainController final : public Controller {
 public:
  enum class GainSchedule { kHarmonic, kQuadratic };

  ResettingGainController(GainSchedule schedule, int dim);

  static double Gain(GainSchedule schedule, TimeIndex tau);

  void Reset() override { counter_.Reset(); }
  Vector Act(const Vector& x, const RevealedCost& revealed) override;
  std::unique_ptr<Controller> Clone() const override;
  const ControllerInfo& info() const override { return info_; }

  GainSchedule gain_schedule() const { return schedule_; }
  const TauCounter& counter() const { return counter_; }

 private:
  GainSchedule schedule_;
  int dim_;
  TauCounter counter_;
  ControllerInfo info_;
};

/// Exponential-decay envelope ||A^t|| <= c lambda^t.
struct SpectralEnvelope {
  double c = 1.0;
  double lambda = 0.0;
  double spectral_radius = 0.0;
  bool normal = false;
};

double SpectralRadius(const Matrix& a);

/// Fits (c, lambda) for a Schur-stable matrix and validates it on t <= t_max.
/// Normal matrices satisfy ||A^t|| = rho^t, so they get lambda = rho and c = 1
/// (lambda = margin when rho = 0). Otherwise lambda = rho + min(0.05, (1-rho)/2)
/// and c = max_{t <= t_max} ||A^t|| / lambda^t. Throws BoundError when rho >= 1.
SpectralEnvelope ComputeSpectralEnvelope(const Matrix& closed_loop, int t_max = 500);

/// u_t = K (x_t - theta_{t-1}) + eta_{t-1}.
class LinearFeedbackController final : public Controller {
 public:
  /// `plant` must be linear; the constructor evaluates A + BK and records a
  /// warning when it is not Schur stable.
  LinearFeedbackController(Matrix gain, const SystemModel& plant);

  void Reset() override {}
  Vector Act(const Vector& x, const RevealedCost& revealed) override;
  std::unique_ptr<Controller> Clone() const override;
  const ControllerInfo& info() const override { return info_; }

  const Matrix& gain() const { return gain_; }
  const Matrix& closed_loop() const { return closed_loop_; }
  const std::optional<SpectralEnvelope>& envelope() const { return envelope_; }

 private:
  Matrix gain_;
  Matrix closed_loop_;
  std::optional<SpectralEnvelope> envelope_;
  ControllerInfo info_;
};

/// Generic controller given by user-supplied f^A and h^A.
class StateSpaceController final : public Controller {
 public:
  using UpdateFn = std::function<Vector(const Vector& xa, const Vector& x, const RevealedCost&)>;
  using OutputFn = std::function<Vector(const Vector& xa, const Vector& x, const RevealedCost&)>;

  StateSpaceController(Vector initial_state, UpdateFn update, OutputFn output, ControllerInfo info);

  void Reset() override { state_ = initial_; }
  Vector Act(const Vector& x, const RevealedCost& revealed) override;
  std::unique_ptr<Controller> Clone() const override;
  const ControllerInfo& info() const override { return info_; }

  const Vector& state() const { return state_; }

 private:
  Vector initial_;
  Vector state_;
  UpdateFn update_;
  OutputFn output_;
  ControllerInfo info_;
};

}  // namespace reglab
