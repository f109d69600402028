#include "reglab/json_io.hpp"

#include <cmath>

namespace reglab {

namespace cfg {

const Json& Require(const Json& obj, const std::string& path, const std::string& key) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + "/" + key, "missing required key");
  return *it;
}

double Number(const Json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "expected a finite number");
  return d;
}

std::int64_t Integer(const Json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && std::floor(d) == d && std::abs(d) < 9e15) {
      return static_cast<std::int64_t>(d);
    }
  }
  throw ConfigError(path, "expected an integer");
}

bool Boolean(const Json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
  return v.get<bool>();
}

std::string String(const Json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

Vector ParseVector(const Json& v, const std::string& path) {
  if (v.is_number()) {
    Vector out(1);
    out(0) = Number(v, path);
    return out;
  }
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a nonempty array of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = Number(v[i], path + "/" + std::to_string(i));
  }
  return out;
}

Matrix ParseMatrix(const Json& v, const std::string& path) {
  if (v.is_number()) {
    Matrix out(1, 1);
    out(0, 0) = Number(v, path);
    return out;
  }
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a nonempty array of rows");
  std::size_t cols = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string row_path = path + "/" + std::to_string(i);
    if (!v[i].is_array() || v[i].empty()) throw ConfigError(row_path, "expected a nonempty row");
    if (i == 0) cols = v[i].size();
    if (v[i].size() != cols) {
      throw ConfigError(row_path, "row has " + std::to_string(v[i].size()) + " entries, expected " +
                                      std::to_string(cols));
    }
  }
  Matrix out(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          Number(v[i][j], path + "/" + std::to_string(i) + "/" + std::to_string(j));
    }
  }
  return out;
}

}  // namespace cfg

Json VectorToJson(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json MatrixToJson(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

SystemModel SystemFromJson(const Json& j, const std::string& path) {
  const std::string kind = cfg::String(cfg::Require(j, path, "kind"), path + "/kind");
  if (kind == "integrator") {
    const auto dim = cfg::Integer(cfg::Require(j, path, "dim"), path + "/dim");
    if (dim < 1) throw ConfigError(path + "/dim", "dimension must be positive");
    return SystemModel::Integrator(static_cast<int>(dim));
  }
  if (kind == "linear") {
    Matrix a = cfg::ParseMatrix(cfg::Require(j, path, "A"), path + "/A");
    Matrix b = cfg::ParseMatrix(cfg::Require(j, path, "B"), path + "/B");
    if (a.rows() != a.cols()) throw ConfigError(path + "/A", "A must be square");
    if (b.rows() != a.rows()) {
      throw ConfigError(path + "/B", "B must have " + std::to_string(a.rows()) + " rows");
    }
    return SystemModel::Linear(std::move(a), std::move(b));
  }
  if (kind == "custom") {
    throw ConfigError(path + "/kind", "custom systems are only available through the library API");
  }
  throw ConfigError(path + "/kind", "unknown system kind '" + kind + "'");
}

Json SystemToJson(const SystemModel& system) {
  switch (system.kind()) {
    case SystemModel::Kind::kIntegrator:
      return {{"kind", "integrator"}, {"dim", system.state_dim()}};
    case SystemModel::Kind::kLinear:
      return {{"kind", "linear"}, {"A", MatrixToJson(system.A())}, {"B", MatrixToJson(system.B())}};
    case SystemModel::Kind::kCustom:
      break;
  }
  return {{"kind", "custom"}, {"n", system.state_dim()}, {"m", system.input_dim()}};
}

SteadyStatePair SteadyPairFromJson(const Json& j, const SystemModel* system,
                                   const std::string& path) {
  SteadyStatePair pair;
  pair.theta = cfg::ParseVector(cfg::Require(j, path, "theta"), path + "/theta");
  if (system && pair.theta.size() != system->state_dim()) {
    throw ConfigError(path + "/theta", "expected dimension " + std::to_string(system->state_dim()));
  }
  auto it = j.find("eta");
  if (it == j.end() || (it->is_string() && it->get<std::string>() == "solve")) {
    if (!system) throw ConfigError(path + "/eta", "\"solve\" needs a system");
    auto eta = system->SolveSteadyInput(pair.theta);
    if (!eta) throw ConfigError(path + "/theta", "no steady-state input exists for this theta");
    pair.eta = *eta;
  } else {
    pair.eta = cfg::ParseVector(*it, path + "/eta");
    if (system && pair.eta.size() != system->input_dim()) {
      throw ConfigError(path + "/eta", "expected dimension " + std::to_string(system->input_dim()));
    }
  }
  if (system && !ValidateSteadyState(*system, pair)) {
    throw ConfigError(path, "(eta, theta) is not a steady state of the system");
  }
  return pair;
}

CostSchedule ScheduleFromJson(const Json& j, const SystemModel* system, const std::string& path,
                              TimeIndex default_horizon) {
  if (!j.is_object()) throw ConfigError(path, "expected a schedule object");
  TimeIndex horizon = default_horizon;
  if (auto it = j.find("horizon"); it != j.end()) {
    horizon = cfg::Integer(*it, path + "/horizon");
  }
  if (horizon < 0) throw ConfigError(path + "/horizon", "missing or negative horizon");

  const std::string seg_path = path + "/segments";
  const Json& segs = cfg::Require(j, path, "segments");
  if (!segs.is_array() || segs.empty()) throw ConfigError(seg_path, "expected a nonempty array");
  std::vector<CostSegment> segments;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string p = seg_path + "/" + std::to_string(i);
    const Json& s = segs[i];
    CostSegment seg;
    seg.start = cfg::Integer(cfg::Require(s, p, "start"), p + "/start");
    seg.steady = SteadyPairFromJson(s, system, p);
    if (auto it = s.find("p"); it != s.end()) {
      const auto pw = cfg::Integer(*it, p + "/p");
      if (pw != 1 && pw != 2) throw ConfigError(p + "/p", "p must be 1 or 2");
      seg.p = static_cast<int>(pw);
    }
    if (auto it = s.find("q"); it != s.end()) seg.q = cfg::Number(*it, p + "/q");
    if (auto it = s.find("r"); it != s.end()) seg.r = cfg::Number(*it, p + "/r");
    if (!(seg.q > 0.0)) throw ConfigError(p + "/q", "q must be positive");
    if (!(seg.r > 0.0)) throw ConfigError(p + "/r", "r must be positive");
    if (i > 0 && seg.start <= segments.back().start) {
      throw ConfigError(p + "/start", "start times must strictly increase");
    }
    if (i == 0 && seg.start != 0) throw ConfigError(p + "/start", "first segment must start at 0");
    if (seg.start > horizon) throw ConfigError(p + "/start", "segment starts after the horizon");
    segments.push_back(std::move(seg));
  }
  try {
    return CostSchedule(std::move(segments), horizon);
  } catch (const ScheduleError& e) {
    throw ConfigError(seg_path, e.what());
  }
}

Json ScheduleToJson(const CostSchedule& schedule) {
  Json segs = Json::array();
  for (const CostSegment& s : schedule.segments()) {
    segs.push_back({{"start", s.start},
                    {"theta", VectorToJson(s.steady.theta)},
                    {"eta", VectorToJson(s.steady.eta)},
                    {"p", s.p},
                    {"q", s.q},
                    {"r", s.r}});
  }
  return {{"horizon", schedule.horizon()}, {"segments", std::move(segs)}};
}

Json ToJson(const BoundReport& r) {
  return {{"M", r.M},
          {"delta", r.delta},
          {"P", r.P},
          {"C_N0", r.C_N0},
          {"C_hat", r.C_hat},
          {"C0", r.C0},
          {"C_eta", r.C_eta},
          {"C_theta", r.C_theta},
          {"C_const", r.C_const},
          {"l", r.l},
          {"k", r.k},
          {"k_u", r.k_u},
          {"k_zeta", r.k_zeta},
          {"path_theta", r.path_theta},
          {"path_eta", r.path_eta},
          {"sum_x_bound", r.sum_x_bound},
          {"sum_u_bound", r.sum_u_bound},
          {"total", r.total}};
}

Json ToJson(const RateCertificate& cert) {
  Json out = {{"k", cert.k}, {"family", cert.FamilyTag()}};
  if (cert.family == SigmaFamily::kGeometric) out["lambda"] = cert.lambda;
  if (cert.family == SigmaFamily::kEmpirical) out["t_max"] = cert.table.size() - 1;
  return out;
}

Json ToJson(const SummabilityVerdict& v) {
  Json out = {{"verdict", ToString(v.verdict)},
              {"horizons", v.horizons},
              {"partial_sums", v.partial_sums},
              {"growth_per_doubling", v.growth_per_doubling}};
  if (v.verdict == Summability::kBounded) out["D"] = v.bound;
  return out;
}

Json ToJson(const PathLength& p) { return {{"theta", p.theta}, {"eta", p.eta}}; }

}  // namespace reglab
