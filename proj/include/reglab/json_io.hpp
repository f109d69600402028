#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "reglab/bounds.hpp"
#include "reglab/cost_schedule.hpp"
#include "reglab/metrics.hpp"
#include "reglab/rate_certificate.hpp"
#include "reglab/system_model.hpp"

namespace reglab {

using Json = nlohmann::json;

/// Invalid configuration or schedule document. `path()` is a JSON pointer to
/// the offending value ("" for the document root).
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::invalid_argument((path.empty() ? std::string("/") : path) + ": " + what),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Typed accessors that raise ConfigError with the pointer of the bad value.
namespace cfg {

const Json& Require(const Json& obj, const std::string& path, const std::string& key);
double Number(const Json& v, const std::string& path);
std::int64_t Integer(const Json& v, const std::string& path);
bool Boolean(const Json& v, const std::string& path);
std::string String(const Json& v, const std::string& path);
Vector ParseVector(const Json& v, const std::string& path);
Matrix ParseMatrix(const Json& v, const std::string& path);

}  // namespace cfg

Json VectorToJson(const Vector& v);
Json MatrixToJson(const Matrix& m);

/// {"kind": "integrator", "dim": n} or {"kind": "linear", "A": [[..]], "B": [[..]]}.
SystemModel SystemFromJson(const Json& j, const std::string& path = "");
Json SystemToJson(const SystemModel& system);

/// {"theta": [..], "eta": [..] | "solve"}. "solve" needs the system.
SteadyStatePair SteadyPairFromJson(const Json& j, const SystemModel* system,
                                   const std::string& path);

/// {"horizon": T, "segments": [{"start", "theta", "eta" | "solve", "p", "q", "r"}]}.
/// `default_horizon` is used when the document has no horizon; pass a negative
/// value to make it mandatory. Segment pairs are validated against the system
/// when one is given.
CostSchedule ScheduleFromJson(const Json& j, const SystemModel* system, const std::string& path,
                              TimeIndex default_horizon = -1);
Json ScheduleToJson(const CostSchedule& schedule);

Json ToJson(const BoundReport& r);
Json ToJson(const RateCertificate& cert);
Json ToJson(const SummabilityVerdict& v);
Json ToJson(const PathLength& p);

}  // namespace reglab
