#include "reglab/controller.hpp"

#include <algorithm>
#include <cmath>

namespace reglab {

void TauCounter::Observe(TimeIndex segment_id) {
  if (!started_) {
    started_ = true;
    tau_ = 0;
    last_seen_ = segment_id;
    return;
  }
  if (segment_id != last_seen_) {
    tau_ = 1;
    last_seen_ = segment_id;
  } else {
    ++tau_;
  }
}

ResettingGainController::ResettingGainController(GainSchedule schedule, int dim)
    : schedule_(schedule), dim_(dim) {
  if (dim <= 0) throw DimensionError("controller dim", 1, dim);
  if (schedule == GainSchedule::kHarmonic) {
    info_.name = "example1-baseline";
    info_.rate = RateCertificate::Inverse(1.0);
  } else {
    info_.name = "example1-improved";
    info_.rate = RateCertificate::InverseSquare(1.0);
  }
  // Both gains lie in (0, 1] for tau >= 0.
  info_.input_bound = InputBoundConstants{1.0, 0.0};
}

double ResettingGainController::Gain(GainSchedule schedule, TimeIndex tau) {
  const double t1 = static_cast<double>(tau) + 1.0;
  if (schedule == GainSchedule::kHarmonic) return 1.0 / t1;
  return (2.0 * static_cast<double>(tau) + 1.0) / (t1 * t1);
}

Vector ResettingGainController::Act(const Vector& x, const RevealedCost& revealed) {
  ExpectSize("x", dim_, x.size());
  ExpectSize("theta_prev", dim_, revealed.steady.theta.size());
  counter_.Observe(revealed.segment_id);
  const double g = Gain(schedule_, counter_.tau());
  return -g * x + g * revealed.steady.theta;
}

std::unique_ptr<Controller> ResettingGainController::Clone() const {
  return std::make_unique<ResettingGainController>(*this);
}

double SpectralRadius(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

double OperatorNorm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

}  // namespace

SpectralEnvelope ComputeSpectralEnvelope(const Matrix& closed_loop, int t_max) {
  ExpectSize("A_cl.cols", closed_loop.rows(), closed_loop.cols());
  SpectralEnvelope env;
  env.spectral_radius = SpectralRadius(closed_loop);
  if (!(env.spectral_radius < 1.0)) {
    throw BoundError("not Schur stable (spectral radius " + std::to_string(env.spectral_radius) +
                     ")");
  }
  const double scale = std::max(1.0, closed_loop.squaredNorm());
  env.normal = (closed_loop * closed_loop.transpose() - closed_loop.transpose() * closed_loop)
                   .norm() <= 1e-12 * scale;
  const double margin = std::min(0.05, (1.0 - env.spectral_radius) / 2.0);

  if (env.normal && env.spectral_radius > 0.0) {
    env.lambda = env.spectral_radius;
    env.c = 1.0;
    return env;
  }
  env.lambda = env.spectral_radius + margin;
  Matrix power = Matrix::Identity(closed_loop.rows(), closed_loop.cols());
  double lambda_t = 1.0;
  env.c = 1.0;
  for (int t = 0; t <= t_max; ++t) {
    env.c = std::max(env.c, OperatorNorm(power) / lambda_t);
    power = closed_loop * power;
    lambda_t *= env.lambda;
    if (lambda_t == 0.0) break;
  }
  return env;
}

LinearFeedbackController::LinearFeedbackController(Matrix gain, const SystemModel& plant)
    : gain_(std::move(gain)) {
  if (plant.kind() == SystemModel::Kind::kCustom) {
    throw std::invalid_argument("linear feedback requires an integrator or linear plant");
  }
  ExpectSize("K.rows", plant.input_dim(), gain_.rows());
  ExpectSize("K.cols", plant.state_dim(), gain_.cols());
  const int n = plant.state_dim();
  const Matrix a = plant.kind() == SystemModel::Kind::kLinear ? plant.A() : Matrix::Identity(n, n);
  const Matrix b = plant.kind() == SystemModel::Kind::kLinear ? plant.B() : Matrix::Identity(n, n);
  closed_loop_ = a + b * gain_;

  info_.name = "linear-feedback";
  info_.input_bound = InputBoundConstants{OperatorNorm(gain_), 0.0};
  const double rho = SpectralRadius(closed_loop_);
  if (rho < 1.0) {
    envelope_ = ComputeSpectralEnvelope(closed_loop_);
    info_.rate = RateCertificate::Geometric(envelope_->c, envelope_->lambda);
  } else {
    info_.warning = "A + BK is not Schur stable (spectral radius " + std::to_string(rho) +
                    "); stability not guaranteed";
  }
}

Vector LinearFeedbackController::Act(const Vector& x, const RevealedCost& revealed) {
  ExpectSize("x", gain_.cols(), x.size());
  ExpectSize("theta_prev", gain_.cols(), revealed.steady.theta.size());
  ExpectSize("eta_prev", gain_.rows(), revealed.steady.eta.size());
  return gain_ * (x - revealed.steady.theta) + revealed.steady.eta;
}

std::unique_ptr<Controller> LinearFeedbackController::Clone() const {
  return std::make_unique<LinearFeedbackController>(*this);
}

StateSpaceController::StateSpaceController(Vector initial_state, UpdateFn update, OutputFn output,
                                           ControllerInfo info)
    : initial_(std::move(initial_state)),
      state_(initial_),
      update_(std::move(update)),
      output_(std::move(output)),
      info_(std::move(info)) {
  if (!update_ || !output_) throw std::invalid_argument("state-space controller needs f^A and h^A");
  if (info_.name.empty()) info_.name = "custom";
}

Vector StateSpaceController::Act(const Vector& x, const RevealedCost& revealed) {
  Vector u = output_(state_, x, revealed);
  state_ = update_(state_, x, revealed);
  return u;
}

std::unique_ptr<Controller> StateSpaceController::Clone() const {
  return std::make_unique<StateSpaceController>(*this);
}

}  // namespace reglab
