#include "reglab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "reglab/trace_io.hpp"

namespace reglab {

namespace {

void RejectUnknownKeys(const Json& obj, const std::string& path,
                       const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError(path + "/" + it.key(), "unknown key");
  }
}

PriorSpec PriorFromJson(const Json& j, const SystemModel& system, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "hold-initial-state") return PriorSpec::Policy(PriorPolicy::kHoldInitialState);
    if (s == "first-segment") return PriorSpec::Policy(PriorPolicy::kFirstSegment);
    throw ConfigError(path, "unknown prior '" + s + "' (hold-initial-state, first-segment)");
  }
  if (j.is_object()) return PriorSpec::Explicit(SteadyPairFromJson(j, &system, path));
  throw ConfigError(path, "expected a prior name or a {theta, eta} object");
}

std::optional<std::uint64_t> EnvSeed() {
  const char* env = std::getenv("REGLAB_SEED");
  if (!env || !*env) return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw ConfigError("", "REGLAB_SEED must be a nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

Summability ParseVerdict(const Json& j, const std::string& path) {
  const std::string s = cfg::String(j, path);
  if (s == "bounded") return Summability::kBounded;
  if (s == "diverging") return Summability::kDiverging;
  if (s == "inconclusive") return Summability::kInconclusive;
  throw ConfigError(path, "expected bounded, diverging or inconclusive");
}

AnalysisOptions AnalysisFromJson(const Json& j, const std::string& path,
                                 const std::optional<DwellSpec>& generator_dwell,
                                 const SystemModel& system) {
  AnalysisOptions a;
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  RejectUnknownKeys(j, path, {"lyapunov", "input_bound", "certify", "summability", "bounds"});
  if (auto it = j.find("lyapunov"); it != j.end()) a.lyapunov = cfg::Boolean(*it, path + "/lyapunov");
  if (auto it = j.find("input_bound"); it != j.end()) {
    a.input_bound = cfg::Boolean(*it, path + "/input_bound");
  }

  if (auto it = j.find("certify"); it != j.end()) {
    const std::string p = path + "/certify";
    if (it->is_boolean()) {
      if (!it->get<bool>()) a.certify.reset();
    } else {
      if (!it->is_object()) throw ConfigError(p, "expected an object or a boolean");
      RejectUnknownKeys(*it, p, {"grid", "t_max"});
      CertifyOptions c;
      if (auto g = it->find("grid"); g != it->end()) {
        if (!g->is_array() || g->empty()) throw ConfigError(p + "/grid", "expected a nonempty array");
        for (std::size_t i = 0; i < g->size(); ++i) {
          const std::string gp = p + "/grid/" + std::to_string(i);
          Vector v = cfg::ParseVector((*g)[i], gp);
          if (v.size() != system.state_dim()) throw ConfigError(gp, "wrong state dimension");
          c.grid.push_back(std::move(v));
        }
      }
      if (auto t = it->find("t_max"); t != it->end()) {
        const auto tm = cfg::Integer(*t, p + "/t_max");
        if (tm < 1 || tm > 1'000'000) throw ConfigError(p + "/t_max", "must lie in [1, 1e6]");
        c.t_max = static_cast<int>(tm);
      }
      a.certify = std::move(c);
    }
  }

  if (auto it = j.find("summability"); it != j.end()) {
    const std::string p = path + "/summability";
    if (it->is_boolean()) {
      if (it->get<bool>()) a.summability = SummabilityOptionsCfg{};
    } else {
      if (!it->is_object()) throw ConfigError(p, "expected an object or a boolean");
      RejectUnknownKeys(*it, p, {"base", "count", "expect"});
      SummabilityOptionsCfg s;
      if (auto b = it->find("base"); b != it->end()) s.base = cfg::Integer(*b, p + "/base");
      if (auto c = it->find("count"); c != it->end()) {
        s.count = static_cast<int>(cfg::Integer(*c, p + "/count"));
      }
      if (s.base < 1) throw ConfigError(p + "/base", "must be positive");
      if (s.count < 4 || s.count > 20) throw ConfigError(p + "/count", "must lie in [4, 20]");
      if (auto e = it->find("expect"); e != it->end()) s.expect = ParseVerdict(*e, p + "/expect");
      a.summability = s;
    }
  }

  if (auto it = j.find("bounds"); it != j.end()) {
    const std::string p = path + "/bounds";
    if (it->is_boolean() && !it->get<bool>()) return a;
    BoundsOptions b;
    const Json empty = Json::object();
    const Json& bj = it->is_boolean() ? empty : *it;
    if (!bj.is_object()) throw ConfigError(p, "expected an object or a boolean");
    RejectUnknownKeys(bj, p, {"n0", "phi", "rate", "expect"});
    const bool has_n0 = bj.contains("n0");
    const bool has_phi = bj.contains("phi");
    if ((!has_n0 || !has_phi) && !generator_dwell) {
      throw ConfigError(p, "n0 and phi are required when the schedule is not generated");
    }
    if (generator_dwell) b.dwell = *generator_dwell;
    if (has_n0) {
      const auto n0 = cfg::Integer(bj["n0"], p + "/n0");
      if (n0 < 0 || n0 > 5) throw ConfigError(p + "/n0", "must lie in [0, 5]");
      b.dwell.n0 = static_cast<int>(n0);
    }
    if (has_phi) {
      b.dwell.phi = cfg::Number(bj["phi"], p + "/phi");
      if (!(b.dwell.phi > 0.0)) throw ConfigError(p + "/phi", "must be positive");
    }
    if (auto r = bj.find("rate"); r != bj.end()) {
      b.rate = cfg::String(*r, p + "/rate");
      if (b.rate != "declared" && b.rate != "certified") {
        throw ConfigError(p + "/rate", "expected declared or certified");
      }
    }
    if (auto e = bj.find("expect"); e != bj.end()) {
      const std::string s = cfg::String(*e, p + "/expect");
      if (s != "available" && s != "unavailable") {
        throw ConfigError(p + "/expect", "expected available or unavailable");
      }
      b.expect_available = s == "available";
    }
    a.bounds = b;
  }
  return a;
}

struct ScheduleBuild {
  CostSchedule schedule;
  std::optional<DwellSpec> dwell;
  std::optional<std::uint64_t> seed;
  bool degenerate = false;
  std::string note;
};

ScheduleBuild ScheduleSection(Json& j, const SystemModel& system, TimeIndex horizon,
                              const std::string& path, bool apply_env_seed) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  auto gen_it = j.find("generator");
  if (gen_it == j.end()) {
    RejectUnknownKeys(j, path, {"horizon", "segments"});
    CostSchedule s = ScheduleFromJson(j, &system, path, horizon);
    if (s.horizon() < horizon) {
      throw ConfigError(path + "/horizon", "schedule ends before the scenario horizon");
    }
    return ScheduleBuild{std::move(s), std::nullopt, std::nullopt, false, ""};
  }
  RejectUnknownKeys(j, path, {"generator"});
  Json& g = *gen_it;
  const std::string p = path + "/generator";
  if (!g.is_object()) throw ConfigError(p, "expected an object");
  RejectUnknownKeys(g, p, {"seed", "n0", "phi", "targets", "p", "q", "r"});
  if (apply_env_seed) {
    if (auto env = EnvSeed()) g["seed"] = *env;
  }
  const auto seed = cfg::Integer(cfg::Require(g, p, "seed"), p + "/seed");
  if (seed < 0) throw ConfigError(p + "/seed", "must be nonnegative");
  DwellSpec spec;
  const auto n0 = cfg::Integer(cfg::Require(g, p, "n0"), p + "/n0");
  if (n0 < 0 || n0 > 5) throw ConfigError(p + "/n0", "must lie in [0, 5]");
  spec.n0 = static_cast<int>(n0);
  spec.phi = cfg::Number(cfg::Require(g, p, "phi"), p + "/phi");
  if (!(spec.phi > 0.0)) throw ConfigError(p + "/phi", "must be positive");

  const Json& targets = cfg::Require(g, p, "targets");
  if (!targets.is_array() || targets.empty()) {
    throw ConfigError(p + "/targets", "expected a nonempty array");
  }
  std::vector<SteadyStatePair> pool;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    pool.push_back(SteadyPairFromJson(targets[i], &system, p + "/targets/" + std::to_string(i)));
  }
  CostParams params;
  if (auto it = g.find("p"); it != g.end()) {
    const auto pw = cfg::Integer(*it, p + "/p");
    if (pw != 1 && pw != 2) throw ConfigError(p + "/p", "p must be 1 or 2");
    params.p = static_cast<int>(pw);
  }
  if (auto it = g.find("q"); it != g.end()) params.q = cfg::Number(*it, p + "/q");
  if (auto it = g.find("r"); it != g.end()) params.r = cfg::Number(*it, p + "/r");
  if (!(params.q > 0.0)) throw ConfigError(p + "/q", "must be positive");
  if (!(params.r > 0.0)) throw ConfigError(p + "/r", "must be positive");

  GeneratedSchedule gen =
      GenerateAdmissibleSchedule(static_cast<std::uint64_t>(seed), spec, horizon, pool, params);
  return ScheduleBuild{std::move(gen.schedule), spec, static_cast<std::uint64_t>(seed),
                       gen.degenerate, gen.note};
}

std::vector<Vector> DefaultGrid(const Vector& theta) {
  std::vector<Vector> grid;
  for (double r : {0.5, 1.0, 2.0}) {
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      for (double sign : {1.0, -1.0}) {
        Vector x = theta;
        x(i) += sign * r;
        grid.push_back(std::move(x));
      }
    }
  }
  return grid;
}

class CheckList {
 public:
  void Add(const std::string& name, bool passed, const std::string& detail = "") {
    Json c = {{"name", name}, {"passed", passed}};
    if (!detail.empty()) c["detail"] = detail;
    checks_.push_back(std::move(c));
  }
  const Json& json() const { return checks_; }
  bool all_passed() const {
    return std::all_of(checks_.begin(), checks_.end(),
                       [](const Json& c) { return c["passed"].get<bool>(); });
  }

 private:
  Json checks_ = Json::array();
};

// Lipschitz constant valid on every point visited by the trajectory.
double TrajectoryLipschitz(const Trajectory& traj, const CostSchedule& schedule, TimeIndex horizon) {
  double radius = 0.0;
  bool quadratic = false;
  for (const CostSegment& s : schedule.segments()) quadratic = quadratic || (!s.custom && s.p == 2);
  if (quadratic) {
    for (TimeIndex t = 0; t <= horizon; ++t) {
      const SteadyStatePair& z = schedule.SteadyAt(t);
      const auto i = static_cast<std::size_t>(t);
      radius = std::max(radius, std::hypot((traj.x[i] - z.theta).norm(), (traj.u[i] - z.eta).norm()));
    }
  }
  double l = 0.0;
  for (const CostSegment& s : schedule.segments()) {
    l = std::max(l, LipschitzConstant(s, quadratic ? radius : std::numeric_limits<double>::infinity()));
  }
  return l;
}

std::string Num(double v) { return FormatDouble(v); }

}  // namespace

std::unique_ptr<Controller> ControllerFromJson(const Json& j, const SystemModel& system,
                                               const std::string& path) {
  std::string kind;
  const bool is_object = j.is_object();
  if (j.is_string()) {
    kind = j.get<std::string>();
  } else if (is_object) {
    kind = cfg::String(cfg::Require(j, path, "kind"), path + "/kind");
  } else {
    throw ConfigError(path, "expected a controller name or object");
  }
  const std::string kind_path = is_object ? path + "/kind" : path;
  if (kind == "example1-baseline" || kind == "example1-improved") {
    if (is_object) RejectUnknownKeys(j, path, {"kind"});
    if (system.state_dim() != system.input_dim()) {
      throw ConfigError(kind_path, kind + " needs a system with n = m");
    }
    const auto schedule = kind == "example1-baseline"
                              ? ResettingGainController::GainSchedule::kHarmonic
                              : ResettingGainController::GainSchedule::kQuadratic;
    return std::make_unique<ResettingGainController>(schedule, system.state_dim());
  }
  if (kind == "linear-feedback") {
    if (!is_object) throw ConfigError(path, "linear-feedback needs a gain K");
    RejectUnknownKeys(j, path, {"kind", "K"});
    Matrix k = cfg::ParseMatrix(cfg::Require(j, path, "K"), path + "/K");
    if (k.rows() != system.input_dim() || k.cols() != system.state_dim()) {
      throw ConfigError(path + "/K", "K must be " + std::to_string(system.input_dim()) + "x" +
                                         std::to_string(system.state_dim()));
    }
    return std::make_unique<LinearFeedbackController>(std::move(k), system);
  }
  if (kind == "custom") {
    throw ConfigError(kind_path, "custom controllers are only available through the library API");
  }
  throw ConfigError(kind_path, "unknown controller '" + kind + "'");
}

Scenario ParseScenario(const Json& config_in, bool apply_env_seed) {
  Json config = config_in;
  if (!config.is_object()) throw ConfigError("", "configuration must be a JSON object");
  RejectUnknownKeys(config, "", {"name", "system", "controller", "prior", "x0", "horizon",
                                 "schedule", "analysis", "outputs"});
  SystemModel system = SystemFromJson(cfg::Require(config, "", "system"), "/system");

  const TimeIndex horizon = cfg::Integer(cfg::Require(config, "", "horizon"), "/horizon");
  if (horizon < 0 || horizon > 10'000'000) throw ConfigError("/horizon", "must lie in [0, 1e7]");
  Vector x0 = cfg::ParseVector(cfg::Require(config, "", "x0"), "/x0");
  if (x0.size() != system.state_dim()) {
    throw ConfigError("/x0", "expected dimension " + std::to_string(system.state_dim()));
  }

  cfg::Require(config, "", "schedule");
  ScheduleBuild built =
      ScheduleSection(config["schedule"], system, horizon, "/schedule", apply_env_seed);

  Scenario sc(std::move(system), std::move(built.schedule));
  sc.generator_dwell = built.dwell;
  sc.seed = built.seed;
  sc.schedule_degenerate = built.degenerate;
  sc.schedule_note = built.note;
  sc.horizon = horizon;
  sc.x0 = std::move(x0);
  if (auto it = config.find("name"); it != config.end()) sc.name = cfg::String(*it, "/name");
  sc.controller = ControllerFromJson(cfg::Require(config, "", "controller"), sc.system, "/controller");
  if (auto it = config.find("prior"); it != config.end()) {
    sc.prior = PriorFromJson(*it, sc.system, "/prior");
  }
  if (auto it = config.find("analysis"); it != config.end()) {
    sc.analysis = AnalysisFromJson(*it, "/analysis", sc.generator_dwell, sc.system);
  }
  if (auto it = config.find("outputs"); it != config.end()) {
    if (!it->is_object()) throw ConfigError("/outputs", "expected an object");
    RejectUnknownKeys(*it, "/outputs", {"trace", "report"});
    if (auto t = it->find("trace"); t != it->end()) sc.trace_path = cfg::String(*t, "/outputs/trace");
    if (auto r = it->find("report"); r != it->end()) {
      sc.report_path = cfg::String(*r, "/outputs/report");
    }
  }
  sc.config = std::move(config);
  return sc;
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("", "cannot open '" + path + "'");
  try {
    return Json::parse(is);
  } catch (const Json::parse_error& e) {
    throw ConfigError("", "'" + path + "' is not valid JSON: " + e.what());
  }
}

Scenario LoadScenarioFile(const std::string& path, bool apply_env_seed) {
  return ParseScenario(ReadJsonFile(path), apply_env_seed);
}

Json Analyze(const Scenario& sc, const Trajectory& traj) {
  const TimeIndex T = sc.horizon;
  if (traj.horizon != T || traj.u.size() != static_cast<std::size_t>(T) + 1 ||
      traj.x.size() != static_cast<std::size_t>(T) + 2 || traj.loss.size() != traj.u.size() ||
      traj.regret_cum.size() != traj.u.size()) {
    throw std::invalid_argument("trajectory does not match the scenario horizon");
  }
  const CostSchedule& schedule = sc.schedule;
  const ControllerInfo& info = sc.controller->info();
  CheckList checks;
  Json report;
  report["name"] = sc.name;
  report["system"] = sc.system.Describe();
  report["controller"] = info.name;
  report["horizon"] = T;
  if (sc.seed) report["seed"] = *sc.seed;

  const SwitchTimes sw = GetSwitchTimes(schedule);
  report["schedule"] = {{"segments", sw.count}, {"switch_times", sw.times}};
  if (sc.schedule_degenerate) report["schedule"]["degenerate"] = sc.schedule_note;

  // Trajectory integrity.
  const auto mismatch = FindDynamicsMismatch(sc.system, traj);
  checks.Add("dynamics_consistent", !mismatch,
             mismatch ? "x_{t+1} != f(x_t, u_t) at t = " + std::to_string(*mismatch) : "");
  double min_loss = std::numeric_limits<double>::infinity();
  std::optional<TimeIndex> loss_mismatch;
  double running = 0.0;
  for (TimeIndex t = 0; t <= T; ++t) {
    const auto i = static_cast<std::size_t>(t);
    const double loss = StepLoss(traj, schedule, t);
    running += loss;
    min_loss = std::min(min_loss, loss);
    if (!loss_mismatch && (loss != traj.loss[i] || running != traj.regret_cum[i])) loss_mismatch = t;
  }
  checks.Add("loss_recomputed", !loss_mismatch,
             loss_mismatch ? "stored loss differs at t = " + std::to_string(*loss_mismatch) : "");
  checks.Add("loss_nonnegative", min_loss >= -1e-12, "min loss " + Num(min_loss));
  bool monotone = true;
  for (std::size_t t = 1; t < traj.regret_cum.size(); ++t) {
    monotone = monotone && traj.regret_cum[t] >= traj.regret_cum[t - 1] - 1e-12;
  }
  checks.Add("regret_monotone", monotone);

  // Regret and its two-sum bound.
  const double regret = DynamicRegret(traj, schedule, T);
  report["regret"] = regret;
  const PathLength path = ComputePathLength(schedule, T);
  report["path_length"] = ToJson(path);
  const TrackingSums sums = ComputeTrackingSums(traj, schedule, T);
  report["tracking"] = {{"sum_x", sums.x}, {"sum_u", sums.u}};
  const double l = TrajectoryLipschitz(traj, schedule, T);
  report["lipschitz"] = l;
  const double two_sums = l * (sums.x + sums.u);
  checks.Add("regret_within_two_sums", regret <= two_sums + 1e-9,
             Num(regret) + " <= " + Num(two_sums));

  // Declared controller properties.
  Json declared = Json::object();
  if (info.rate) declared["rate"] = ToJson(*info.rate);
  if (info.input_bound) {
    declared["input_bound"] = {{"k_u", info.input_bound->k_u}, {"k_zeta", info.input_bound->k_zeta}};
  }
  if (info.warning) declared["warning"] = *info.warning;
  report["declared"] = declared;

  // Input bound.
  std::optional<InputBoundConstants> fitted;
  if (sc.analysis.input_bound) {
    try {
      fitted = FitInputBound(traj, schedule);
      report["input_bound"] = {{"k_u", fitted->k_u}, {"k_zeta", fitted->k_zeta}};
      checks.Add("input_bound_fit", true);
    } catch (const AssumptionViolation& e) {
      report["input_bound"] = {{"error", e.what()}, {"step", e.step()}};
      checks.Add("input_bound_fit", false, e.what());
    }
    if (info.input_bound) {
      const auto v = FindInputBoundViolation(traj, schedule, *info.input_bound);
      checks.Add("input_bound_declared", !v,
                 v ? "declared constants fail at t = " + std::to_string(*v) : "");
    }
  }

  // Rate certificate under the first segment's cost.
  std::optional<RateCertificate> certified;
  if (sc.analysis.certify) {
    const CertifyOptions& co = *sc.analysis.certify;
    const CostSegment& seg0 = schedule.segments().front();
    const std::vector<Vector> grid = co.grid.empty() ? DefaultGrid(seg0.steady.theta) : co.grid;
    Json rate;
    try {
      certified = CertifyRate(sc.system, *sc.controller, seg0, grid, co.t_max, sc.prior);
      rate["certified"] = ToJson(*certified);
      rate["sigma_t_max"] = certified->Sigma(co.t_max);
      rate["truncation_horizon"] = LyapunovTruncationHorizon(*certified);
      const auto v = FindRateViolation(sc.system, *sc.controller, seg0, grid, *certified, co.t_max,
                                       sc.prior);
      checks.Add("rate_certificate", !v,
                 v ? "certificate fails at t = " + std::to_string(v->t) : "");
      if (info.rate) {
        const auto dv = FindRateViolation(sc.system, *sc.controller, seg0, grid, *info.rate,
                                          co.t_max, sc.prior);
        checks.Add("declared_rate", !dv,
                   dv ? "declared rate fails at t = " + std::to_string(dv->t) + " for grid point " +
                            std::to_string(dv->grid_index)
                      : "");
      }
    } catch (const std::exception& e) {
      rate["error"] = e.what();
      checks.Add("rate_certificate", false, e.what());
    }
    report["rate"] = rate;
  }

  // Tail regret under a constant cost.
  if (sc.analysis.lyapunov) {
    Json ly;
    const bool constant = schedule.IsConstantOn(0, T);
    ly["applicable"] = constant;
    if (constant) {
      const std::vector<double> v = LyapunovTailSeries(traj, schedule, T);
      double residual = 0.0;
      double min_v = std::numeric_limits<double>::infinity();
      for (TimeIndex t = 0; t <= T; ++t) {
        const auto i = static_cast<std::size_t>(t);
        residual = std::max(residual, std::abs(v[i + 1] - v[i] + traj.loss[i]));
        min_v = std::min(min_v, v[i]);
      }
      ly["V0"] = v[0];
      ly["max_telescoping_residual"] = residual;
      ly["min_V"] = min_v;
      checks.Add("lyapunov_telescoping", residual <= 1e-12, "residual " + Num(residual));
      checks.Add("lyapunov_nonnegative", min_v >= -1e-12, "min V " + Num(min_v));
    }
    report["lyapunov"] = ly;
  }

  // Summability under the first segment held constant.
  if (sc.analysis.summability) {
    const SummabilityOptionsCfg& so = *sc.analysis.summability;
    const std::vector<TimeIndex> horizons = DoublingHorizons(so.base, so.count);
    const CostSegment& seg0 = schedule.segments().front();
    const CostSchedule probe = CostSchedule::Constant(seg0, horizons.back());
    auto ctrl = sc.controller->Clone();
    const Trajectory pt = Rollout(sc.system, *ctrl, probe, sc.x0, horizons.back(), sc.prior);
    std::vector<double> state_sum(pt.u.size());
    double acc = 0.0;
    for (std::size_t t = 0; t < pt.u.size(); ++t) {
      acc += (pt.x[t] - seg0.steady.theta).norm();
      state_sum[t] = acc;
    }
    const SummabilityVerdict verdict = ClassifySummability(
        [&](TimeIndex h) { return state_sum[static_cast<std::size_t>(h)]; }, horizons);
    Json sj = ToJson(verdict);
    std::vector<double> regret_sums;
    for (TimeIndex h : horizons) regret_sums.push_back(pt.regret_cum[static_cast<std::size_t>(h)]);
    sj["regret_partial_sums"] = regret_sums;
    sj["regret_growth_per_doubling"] = regret_sums.back() - regret_sums[regret_sums.size() - 2];
    report["summability"] = sj;
    if (so.expect) {
      checks.Add("summability_verdict", verdict.verdict == *so.expect,
                 "got " + ToString(verdict.verdict) + ", expected " + ToString(*so.expect));
    }
  }

  // Regret bound.
  if (sc.analysis.bounds) {
    const BoundsOptions& bo = *sc.analysis.bounds;
    Json bj;
    bj["n0"] = bo.dwell.n0;
    bj["phi"] = bo.dwell.phi;
    const DwellCheck dwell = CheckDwell(schedule, bo.dwell);
    bj["dwell_admissible"] = dwell.admissible;
    std::string dwell_detail;
    if (dwell.violation) {
      dwell_detail = "violated on [" + std::to_string(dwell.violation->first) + ", " +
                     std::to_string(dwell.violation->second) + "]";
    }
    checks.Add("dwell_admissible", dwell.admissible, dwell_detail);

    std::optional<RateCertificate> rate;
    if (bo.rate == "declared" && info.rate) {
      rate = info.rate;
      bj["rate_source"] = "declared";
    } else if (certified) {
      rate = certified;
      bj["rate_source"] = "certified";
    }
    std::optional<InputBoundConstants> ib = info.input_bound ? info.input_bound : fitted;
    std::string error;
    if (!rate) error = "no rate certificate available";
    if (!ib) error = "no input-bound constants available";
    std::optional<BoundReport> bound;
    if (error.empty()) {
      CertificationInputs ci;
      ci.l = l;
      ci.rate = *rate;
      ci.dwell = bo.dwell;
      ci.k_u = ib->k_u;
      ci.k_zeta = ib->k_zeta;
      ci.x0 = traj.x[0];
      ci.x1 = traj.x[1];
      ci.theta0 = schedule.SteadyAt(0).theta;
      ci.path = path;
      try {
        bound = CertifyRegretBound(ci);
      } catch (const BoundError& e) {
        error = e.what();
      }
    }
    if (bound) {
      bj["report"] = ToJson(*bound);
      bj["margin"] = bound->total - regret;
      checks.Add("bound_expected", bo.expect_available, "a finite bound was produced");
      checks.Add("regret_within_bound", regret <= bound->total + 1e-9,
                 Num(regret) + " <= " + Num(bound->total));
      checks.Add("sum_x_within_bound", sums.x <= bound->sum_x_bound + 1e-9,
                 Num(sums.x) + " <= " + Num(bound->sum_x_bound));
      checks.Add("sum_u_within_bound", sums.u <= bound->sum_u_bound + 1e-9,
                 Num(sums.u) + " <= " + Num(bound->sum_u_bound));
    } else {
      bj["error"] = error;
      checks.Add("bound_expected", !bo.expect_available, error);
    }
    report["bounds"] = bj;
  }

  report["checks"] = checks.json();
  report["passed"] = checks.all_passed();
  return report;
}

Json AnalyzeTraceFile(const Scenario& sc, const std::string& trace_path) {
  const TraceData data = ReadTraceFile(trace_path);
  if (data.traj.horizon != sc.horizon) {
    throw std::runtime_error("trace horizon " + std::to_string(data.traj.horizon) +
                             " differs from the scenario horizon " + std::to_string(sc.horizon));
  }
  for (std::size_t t = 0; t < data.theta.size(); ++t) {
    const SteadyStatePair& z = sc.schedule.SteadyAt(static_cast<TimeIndex>(t));
    if (data.theta[t].size() != z.theta.size() || data.eta[t].size() != z.eta.size() ||
        data.theta[t] != z.theta || data.eta[t] != z.eta) {
      throw std::runtime_error("trace steady pair at t = " + std::to_string(t) +
                               " does not match the scenario schedule");
    }
  }
  return Analyze(sc, data.traj);
}

RunResult RunScenario(const Scenario& sc, bool write_outputs) {
  RunResult out;
  auto ctrl = sc.controller->Clone();
  out.traj = Rollout(sc.system, *ctrl, sc.schedule, sc.x0, sc.horizon, sc.prior);
  out.report = Analyze(sc, out.traj);
  out.failures = FailedChecks(out.report);
  out.passed = out.failures.empty();
  if (write_outputs) {
    if (!sc.trace_path.empty()) WriteTraceFile(sc.trace_path, out.traj, sc.schedule);
    if (!sc.report_path.empty()) WriteJsonFile(sc.report_path, out.report);
  }
  return out;
}

std::vector<std::string> FailedChecks(const Json& report) {
  std::vector<std::string> failed;
  auto it = report.find("checks");
  if (it == report.end()) return failed;
  for (const Json& c : *it) {
    if (c.value("passed", false)) continue;
    std::string line = c.value("name", std::string("?"));
    if (c.contains("detail")) line += ": " + c["detail"].get<std::string>();
    failed.push_back(std::move(line));
  }
  return failed;
}

std::string DumpJson(const Json& j) { return j.dump(2); }

void WriteJsonFile(const std::string& path, const Json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << DumpJson(j) << '\n';
  if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace reglab
