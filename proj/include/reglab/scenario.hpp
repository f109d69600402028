#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "reglab/bounds.hpp"
#include "reglab/controller.hpp"
#include "reglab/cost_schedule.hpp"
#include "reglab/json_io.hpp"
#include "reglab/metrics.hpp"
#include "reglab/rollout.hpp"
#include "reglab/system_model.hpp"

namespace reglab {

struct CertifyOptions {
  std::vector<Vector> grid;  // empty: theta_0 +- {0.5, 1, 2} along every axis
  int t_max = 200;
};

struct SummabilityOptionsCfg {
  TimeIndex base = 125;
  int count = 5;
  std::optional<Summability> expect;
};

struct BoundsOptions {
  DwellSpec dwell;
  /// "declared" uses the controller's own certificate when it has one and the
  /// empirical one otherwise; "certified" always uses the empirical one.
  std::string rate = "declared";
  /// false when the configuration expects no finite bound (e.g. 1/t rates).
  bool expect_available = true;
};

struct AnalysisOptions {
  bool lyapunov = true;
  bool input_bound = true;
  std::optional<CertifyOptions> certify = CertifyOptions{};
  std::optional<SummabilityOptionsCfg> summability;
  std::optional<BoundsOptions> bounds;
};

/// Parsed, validated scenario. Identical configurations (seeds included) give
/// identical runs.
struct Scenario {
  Scenario(SystemModel sys, CostSchedule sched)
      : system(std::move(sys)), schedule(std::move(sched)) {}

  Json config;  // the document this was parsed from, after the seed override
  std::string name = "scenario";
  SystemModel system;
  CostSchedule schedule;
  std::shared_ptr<const Controller> controller;
  std::optional<DwellSpec> generator_dwell;
  std::optional<std::uint64_t> seed;
  bool schedule_degenerate = false;
  std::string schedule_note;
  Vector x0;
  TimeIndex horizon = 0;
  PriorSpec prior;
  AnalysisOptions analysis;
  std::string trace_path;
  std::string report_path;
};

/// Builds a scenario from its JSON configuration. With `apply_env_seed`, the
/// REGLAB_SEED environment variable replaces the generator seed. Throws
/// ConfigError carrying the JSON pointer of the first bad value.
Scenario ParseScenario(const Json& config, bool apply_env_seed = true);
Scenario LoadScenarioFile(const std::string& path, bool apply_env_seed = true);
Json ReadJsonFile(const std::string& path);

/// Controller from {"kind": ..., "K": ...} (or a bare kind string).
std::unique_ptr<Controller> ControllerFromJson(const Json& j, const SystemModel& system,
                                               const std::string& path);

struct RunResult {
  Trajectory traj;
  Json report;
  bool passed = false;
  std::vector<std::string> failures;
};

/// Rolls out the scenario and analyzes it. With `write_outputs`, the trace and
/// report are written to the configured paths.
RunResult RunScenario(const Scenario& scenario, bool write_outputs = true);

/// Every analysis of the report, computed from the scenario and a trajectory
/// alone, so a persisted trace reproduces the report exactly.
Json Analyze(const Scenario& scenario, const Trajectory& traj);

/// Reads a trace, checks that its theta/eta columns match the schedule and
/// re-analyzes it.
Json AnalyzeTraceFile(const Scenario& scenario, const std::string& trace_path);

/// Names (with details) of the failed checks in a report.
std::vector<std::string> FailedChecks(const Json& report);

/// Pretty JSON with round-trip doubles.
std::string DumpJson(const Json& j);
void WriteJsonFile(const std::string& path, const Json& j);

}  // namespace reglab
