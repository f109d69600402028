#include "reglab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace reglab {

namespace {

void ExpectCovers(const Trajectory& traj, const CostSchedule& schedule, TimeIndex horizon) {
  if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
  if (horizon > traj.horizon || static_cast<TimeIndex>(traj.u.size()) <= horizon ||
      static_cast<TimeIndex>(traj.x.size()) <= horizon) {
    throw std::invalid_argument("trajectory covers [0, " + std::to_string(traj.horizon) +
                                "], requested [0, " + std::to_string(horizon) + "]");
  }
  if (horizon > schedule.horizon()) {
    throw std::invalid_argument("schedule covers [0, " + std::to_string(schedule.horizon()) +
                                "], requested [0, " + std::to_string(horizon) + "]");
  }
}

double StackedDistance(const SteadyStatePair& a, const SteadyStatePair& b) {
  return std::hypot((a.theta - b.theta).stableNorm(), (a.eta - b.eta).stableNorm());
}

// ||x_t - theta|| for t = 0..t_max from a single constant-cost run.
std::vector<double> DistanceSeries(const SystemModel& system, const Controller& controller,
                                   const CostSchedule& schedule, const Vector& x0, int t_max,
                                   const PriorSpec& prior) {
  auto ctrl = controller.Clone();
  const Trajectory traj = Rollout(system, *ctrl, schedule, x0, t_max, prior);
  const Vector& theta = schedule.segments().front().steady.theta;
  std::vector<double> d(static_cast<std::size_t>(t_max) + 1);
  for (std::size_t t = 0; t < d.size(); ++t) d[t] = (traj.x[t] - theta).norm();
  return d;
}

CostSchedule ConstantSchedule(const CostSegment& segment, int t_max) {
  CostSegment seg = segment;
  seg.start = 0;
  return CostSchedule::Constant(seg, t_max);
}

// Rounding noise in ||x_t - theta|| after t steps, relative to ||x_0 - theta||.
// `scale` is (||theta|| + ||x_0||) / ||x_0 - theta||; the subtraction cancels
// when x_t is close to a large theta.
double NoiseFloor(double scale, std::size_t t) {
  return 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(t + 1) * scale;
}

// Matches the table against f on t >= 1: never more than 1e-12 above f (so the
// post-hoc check still passes) and at most 1e-9 below, up to rounding noise.
template <typename F>
bool MatchesFamily(const std::vector<double>& table, double scale, F f) {
  for (std::size_t t = 1; t < table.size(); ++t) {
    const double ref = f(static_cast<double>(t));
    const double v = table[t];
    const double noise = NoiseFloor(scale, t);
    if (v > ref * (1.0 + 1e-12) + noise || v < ref * (1.0 - 1e-9) - noise) return false;
  }
  return true;
}

std::vector<Vector> SampleDirections(int n, std::uint64_t seed) {
  std::vector<Vector> dirs;
  if (n <= 3) {
    int total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
      Vector d(n);
      int c = code;
      for (int i = 0; i < n; ++i) {
        d(i) = static_cast<double>(c % 3 - 1);
        c /= 3;
      }
      if (d.squaredNorm() == 0.0) continue;
      dirs.push_back(d.normalized());
    }
    return dirs;
  }
  for (int i = 0; i < n; ++i) {
    dirs.push_back(Vector::Unit(n, i));
    dirs.push_back(-Vector::Unit(n, i));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < 8 * n; ++k) {
    Vector d(n);
    for (int i = 0; i < n; ++i) d(i) = normal(rng);
    if (d.norm() > 0.0) dirs.push_back(d.normalized());
  }
  return dirs;
}

}  // namespace

double StepLoss(const Trajectory& traj, const CostSchedule& schedule, TimeIndex t) {
  const CostSegment& seg = schedule.At(t);
  const auto i = static_cast<std::size_t>(t);
  return seg.Eval(traj.u[i], traj.x[i]) - seg.Eval(seg.steady.eta, seg.steady.theta);
}

double DynamicRegret(const Trajectory& traj, const CostSchedule& schedule, TimeIndex horizon) {
  ExpectCovers(traj, schedule, horizon);
  double sum = 0.0;
  for (TimeIndex t = 0; t <= horizon; ++t) sum += StepLoss(traj, schedule, t);
  return sum;
}

double LyapunovTail(const Trajectory& traj, const CostSchedule& schedule, TimeIndex t,
                    TimeIndex horizon) {
  ExpectCovers(traj, schedule, horizon);
  if (t < 0 || t > horizon + 1) throw std::invalid_argument("t outside [0, T + 1]");
  if (t <= horizon && !schedule.IsConstantOn(t, horizon)) {
    throw ScheduleError("tail regret needs a constant cost on [" + std::to_string(t) + ", " +
                        std::to_string(horizon) + "]");
  }
  double v = 0.0;
  for (TimeIndex tau = horizon; tau >= t; --tau) v = StepLoss(traj, schedule, tau) + v;
  return v;
}

std::vector<double> LyapunovTailSeries(const Trajectory& traj, const CostSchedule& schedule,
                                       TimeIndex horizon) {
  ExpectCovers(traj, schedule, horizon);
  if (!schedule.IsConstantOn(0, horizon)) {
    throw ScheduleError("tail regret series needs a constant cost on [0, " +
                        std::to_string(horizon) + "]");
  }
  std::vector<double> v(static_cast<std::size_t>(horizon) + 2, 0.0);
  for (TimeIndex tau = horizon; tau >= 0; --tau) {
    const auto i = static_cast<std::size_t>(tau);
    v[i] = StepLoss(traj, schedule, tau) + v[i + 1];
  }
  return v;
}

TimeIndex LyapunovTruncationHorizon(const RateCertificate& cert, double threshold, TimeIndex cap) {
  for (TimeIndex t = 1; 10 * t < cap; ++t) {
    if (cert.Sigma(t) < threshold) return 10 * t;
  }
  return cap;
}

TrackingSums ComputeTrackingSums(const Trajectory& traj, const CostSchedule& schedule,
                                 TimeIndex horizon) {
  ExpectCovers(traj, schedule, horizon);
  TrackingSums sums;
  for (TimeIndex t = 0; t <= horizon; ++t) {
    const SteadyStatePair& z = schedule.SteadyAt(t);
    const auto i = static_cast<std::size_t>(t);
    sums.x += (traj.x[i] - z.theta).norm();
    sums.u += (traj.u[i] - z.eta).norm();
  }
  return sums;
}

namespace {

struct InputBoundTerms {
  double a;  // ||u_t - eta_{t-1}||
  double b;  // ||x_t - theta_{t-1}||
  double c;  // ||zeta_{t-1} - zeta_{t-2}||
  double noise_a;  // rounding floor of the subtraction behind a
  double noise_b;  // rounding floor of the subtraction behind b
};

InputBoundTerms InputTerms(const Trajectory& traj, const CostSchedule& schedule, TimeIndex t) {
  const SteadyStatePair& prev = schedule.SteadyAt(t - 1);
  const SteadyStatePair& prev2 = schedule.SteadyAt(t - 2);
  const auto i = static_cast<std::size_t>(t);
  // stableNorm avoids the underflow of squared entries on fast-decaying runs.
  constexpr double kEps = 4.0 * std::numeric_limits<double>::epsilon();
  return {(traj.u[i] - prev.eta).stableNorm(), (traj.x[i] - prev.theta).stableNorm(),
          StackedDistance(prev, prev2),
          kEps * (traj.u[i].stableNorm() + prev.eta.stableNorm()),
          kEps * (traj.x[i].stableNorm() + prev.theta.stableNorm())};
}

}  // namespace

InputBoundConstants FitInputBound(const Trajectory& traj, const CostSchedule& schedule) {
  const TimeIndex horizon = std::min(traj.horizon, schedule.horizon());
  ExpectCovers(traj, schedule, horizon);
  InputBoundConstants fit;
  for (TimeIndex t = 0; t <= horizon; ++t) {
    const InputBoundTerms s = InputTerms(traj, schedule, t);
    if (s.c != 0.0) continue;
    // Ratios of subnormal distances carry only a few significant bits.
    // Discounting both sides by their rounding floor keeps near-converged steps,
    // where the distances are a few ulps, from inflating the ratio.
    if (s.b >= std::numeric_limits<double>::min()) {
      fit.k_u = std::max(fit.k_u, std::max(0.0, s.a - s.noise_a) / (s.b + s.noise_b));
    } else if (s.a > 1e-12) {
      throw AssumptionViolation(
          t, "input bound violated: u_t differs from eta_{t-1} while x_t = theta_{t-1} and the "
             "steady pair is unchanged");
    }
  }
  for (TimeIndex t = 0; t <= horizon; ++t) {
    const InputBoundTerms s = InputTerms(traj, schedule, t);
    if (s.c == 0.0) continue;
    const double excess = s.a - s.noise_a - fit.k_u * s.b;
    if (excess > 0.0) fit.k_zeta = std::max(fit.k_zeta, excess / s.c);
  }
  return fit;
}

std::optional<TimeIndex> FindInputBoundViolation(const Trajectory& traj,
                                                 const CostSchedule& schedule,
                                                 const InputBoundConstants& constants,
                                                 double tol) {
  const TimeIndex horizon = std::min(traj.horizon, schedule.horizon());
  ExpectCovers(traj, schedule, horizon);
  for (TimeIndex t = 0; t <= horizon; ++t) {
    const InputBoundTerms s = InputTerms(traj, schedule, t);
    const double rhs = constants.k_u * s.b + constants.k_zeta * s.c;
    if (s.a > rhs * (1.0 + tol) + 1e-12) return t;
  }
  return std::nullopt;
}

RateCertificate CertifyRate(const SystemModel& system, const Controller& controller,
                            const CostSegment& segment, const std::vector<Vector>& x0_grid,
                            int t_max, const PriorSpec& prior) {
  if (x0_grid.empty()) throw std::invalid_argument("uninformative grid: no initial states");
  if (t_max < 1) throw std::invalid_argument("t_max must be at least 1");
  const CostSchedule schedule = ConstantSchedule(segment, t_max);
  const Vector& theta = segment.steady.theta;

  std::vector<double> raw(static_cast<std::size_t>(t_max) + 1, 0.0);
  bool informative = false;
  double scale = 0.0;
  for (const Vector& x0 : x0_grid) {
    ExpectSize("x0", system.state_dim(), x0.size());
    const double d0 = (x0 - theta).norm();
    if (d0 == 0.0) continue;
    informative = true;
    scale = std::max(scale, (theta.norm() + x0.norm()) / d0);
    const std::vector<double> d = DistanceSeries(system, controller, schedule, x0, t_max, prior);
    for (std::size_t t = 0; t < raw.size(); ++t) raw[t] = std::max(raw[t], d[t] / d0);
  }
  if (!informative) throw std::invalid_argument("uninformative grid: every x0 equals theta");

  for (std::size_t t = raw.size() - 1; t-- > 0;) raw[t] = std::max(raw[t], raw[t + 1]);
  const double k = std::max(1.0, raw[0]);
  for (double& v : raw) v /= k;
  raw[0] = 1.0;

  if (MatchesFamily(raw, scale / k, [](double t) { return 1.0 / (t * t); })) {
    return RateCertificate::InverseSquare(k);
  }
  if (MatchesFamily(raw, scale / k, [](double t) { return 1.0 / t; })) return RateCertificate::Inverse(k);
  const double lambda = raw.size() > 1 ? raw[1] : 0.0;
  if (lambda > 0.0 && lambda < 1.0 &&
      MatchesFamily(raw, scale / k, [lambda](double t) { return std::pow(lambda, t); })) {
    return RateCertificate::Geometric(k, lambda);
  }
  return RateCertificate::Empirical(k, std::move(raw));
}

std::optional<RateViolation> FindRateViolation(const SystemModel& system,
                                               const Controller& controller,
                                               const CostSegment& segment,
                                               const std::vector<Vector>& x0_grid,
                                               const RateCertificate& cert, int t_max,
                                               const PriorSpec& prior) {
  const CostSchedule schedule = ConstantSchedule(segment, t_max);
  const Vector& theta = segment.steady.theta;
  for (std::size_t g = 0; g < x0_grid.size(); ++g) {
    const double d0 = (x0_grid[g] - theta).norm();
    const std::vector<double> d =
        DistanceSeries(system, controller, schedule, x0_grid[g], t_max, prior);
    for (std::size_t t = 0; t < d.size(); ++t) {
      const double bound = cert.k * cert.Sigma(static_cast<TimeIndex>(t)) * d0;
      const double noise = NoiseFloor(theta.norm() + x0_grid[g].norm(), t);
      if (d[t] > bound * (1.0 + 1e-12) + noise) {
        return RateViolation{g, static_cast<TimeIndex>(t)};
      }
    }
  }
  return std::nullopt;
}

PhiEnvelope ComputePhiEnvelope(const SystemModel& system, const Controller& controller,
                               const CostSegment& segment, std::vector<double> radii,
                               int grid_density, int t_max, const PriorSpec& prior,
                               std::uint64_t seed) {
  if (radii.empty()) throw std::invalid_argument("phi envelope needs at least one radius");
  if (grid_density < 1) throw std::invalid_argument("grid_density must be positive");
  if (t_max < 0) throw std::invalid_argument("t_max must be nonnegative");
  for (double s : radii) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("radii must be positive");
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  std::vector<double> sample_radii;
  for (double s : radii) {
    for (int j = 1; j < grid_density; ++j) sample_radii.push_back(s * j / grid_density);
    sample_radii.push_back(s);
  }
  std::sort(sample_radii.begin(), sample_radii.end());
  sample_radii.erase(std::unique(sample_radii.begin(), sample_radii.end()), sample_radii.end());

  const CostSchedule schedule = ConstantSchedule(segment, t_max);
  const Vector& theta = segment.steady.theta;
  const std::vector<Vector> dirs = SampleDirections(system.state_dim(), seed);
  const auto len = static_cast<std::size_t>(t_max) + 1;

  PhiEnvelope env;
  env.radii = radii;
  std::vector<double> running(len, 0.0);
  std::size_t next_radius = 0;
  for (double r : sample_radii) {
    while (next_radius < radii.size() && radii[next_radius] < r) {
      env.value.push_back(running);
      ++next_radius;
    }
    for (const Vector& dir : dirs) {
      std::vector<double> d =
          DistanceSeries(system, controller, schedule, theta + r * dir, t_max, prior);
      for (std::size_t t = len - 1; t-- > 0;) d[t] = std::max(d[t], d[t + 1]);
      for (std::size_t t = 0; t < len; ++t) running[t] = std::max(running[t], d[t]);
    }
  }
  while (env.value.size() < radii.size()) env.value.push_back(running);
  return env;
}

std::string ToString(Summability s) {
  switch (s) {
    case Summability::kBounded:
      return "bounded";
    case Summability::kDiverging:
      return "diverging";
    case Summability::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

SummabilityVerdict ClassifySummability(const std::function<double(TimeIndex)>& partial_sum,
                                       const std::vector<TimeIndex>& horizons,
                                       const SummabilityOptions& options) {
  if (horizons.size() < 4) {
    throw std::invalid_argument("summability test needs at least 4 horizons");
  }
  for (std::size_t i = 1; i < horizons.size(); ++i) {
    if (horizons[i] <= horizons[i - 1]) {
      throw std::invalid_argument("summability horizons must be strictly increasing");
    }
  }
  SummabilityVerdict out;
  out.horizons = horizons;
  for (TimeIndex h : horizons) out.partial_sums.push_back(partial_sum(h));

  std::vector<double> inc;
  for (std::size_t i = 1; i < out.partial_sums.size(); ++i) {
    inc.push_back(out.partial_sums[i] - out.partial_sums[i - 1]);
  }
  out.growth_per_doubling = inc.back();
  const double last = out.partial_sums.back();

  const bool diverging = std::all_of(inc.begin(), inc.end(),
                                     [&](double d) { return d >= options.divergence_floor; });
  if (diverging) {
    out.verdict = Summability::kDiverging;
    return out;
  }

  const double flat = 1e-12 * (1.0 + std::abs(last));
  bool decaying = std::all_of(inc.begin(), inc.end(), [&](double d) { return d >= -flat; });
  for (std::size_t i = 1; decaying && i < inc.size(); ++i) {
    if (std::abs(inc[i]) <= flat) continue;
    decaying = inc[i] <= options.decay_ratio * inc[i - 1];
  }
  if (decaying) {
    out.verdict = Summability::kBounded;
    out.bound = last + options.safety * std::abs(last);
  }
  return out;
}

std::vector<TimeIndex> DoublingHorizons(TimeIndex base, int count) {
  if (base < 1 || count < 1) throw std::invalid_argument("doubling horizons need base, count >= 1");
  std::vector<TimeIndex> out;
  for (int i = 0; i < count; ++i) out.push_back(base << i);
  return out;
}

}  // namespace reglab
