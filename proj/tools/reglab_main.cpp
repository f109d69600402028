// Command-line front end: scenario runs, reproductions, sweeps and checks.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reglab/experiments.hpp"
#include "reglab/json_io.hpp"
#include "reglab/scenario.hpp"
#include "reglab/trace_io.hpp"

namespace {

using reglab::Json;

constexpr int kExitChecksFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int ReportFailures(const std::vector<std::string>& failures) {
  for (const std::string& f : failures) std::cerr << "FAILED " << f << '\n';
  return failures.empty() ? 0 : kExitChecksFailed;
}

std::vector<Json> ParseValues(const std::string& list) {
  std::vector<Json> values;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    item = item.substr(b, item.find_last_not_of(" \t") - b + 1);
    Json v = Json::parse(item, nullptr, false);
    values.push_back(v.is_discarded() ? Json(item) : v);
  }
  return values;
}

int Simulate(const std::string& config_path, const std::string& trace, const std::string& report) {
  reglab::Scenario sc = reglab::LoadScenarioFile(config_path);
  if (!trace.empty()) sc.trace_path = trace;
  if (!report.empty()) sc.report_path = report;
  const reglab::RunResult run = reglab::RunScenario(sc, true);
  std::cout << reglab::DumpJson(run.report) << '\n';
  return ReportFailures(run.failures);
}

int Analyze(const std::string& config_path, const std::string& trace, const std::string& report) {
  const reglab::Scenario sc = reglab::LoadScenarioFile(config_path);
  const Json r = reglab::AnalyzeTraceFile(sc, trace);
  if (!report.empty()) reglab::WriteJsonFile(report, r);
  std::cout << reglab::DumpJson(r) << '\n';
  return ReportFailures(reglab::FailedChecks(r));
}

int Reproduce(const std::string& name, const std::string& out_dir,
              const std::vector<std::uint64_t>& seeds) {
  std::vector<std::string> names;
  if (name == "all") {
    names = reglab::ReproductionNames();
  } else {
    names.push_back(name);
  }
  reglab::ReproduceOptions options;
  options.out_dir = out_dir;
  if (!seeds.empty()) options.seeds = seeds;
  Json bundle = Json::array();
  std::vector<std::string> failures;
  for (const std::string& n : names) {
    const reglab::ReproductionResult r = reglab::Reproduce(n, options);
    bundle.push_back(r.Summary());
    for (std::string f : r.Failures()) failures.push_back(std::move(f));
  }
  std::cout << reglab::DumpJson(names.size() == 1 ? bundle[0] : bundle) << '\n';
  return ReportFailures(failures);
}

int Sweep(const std::string& config_path, const std::string& axis, const std::string& values,
          const std::string& out) {
  const Json base = reglab::ReadJsonFile(config_path);
  const std::vector<reglab::SweepRow> rows = reglab::Sweep(base, axis, ParseValues(values));
  if (out.empty()) {
    reglab::WriteSweepCsv(std::cout, rows);
  } else {
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot open '" + out + "' for writing");
    reglab::WriteSweepCsv(os, rows);
  }
  std::vector<std::string> failures;
  for (const reglab::SweepRow& r : rows) {
    if (r.status != "pass") failures.push_back(r.value.dump() + ": " + r.status);
  }
  return ReportFailures(failures);
}

int DwellCheck(const std::string& path, int n0, double phi) {
  const Json doc = reglab::ReadJsonFile(path);
  reglab::DwellSpec spec{n0, phi};
  if (!(phi > 0.0) || n0 < 0) throw reglab::ConfigError("", "need n0 >= 0 and phi > 0");
  std::optional<reglab::CostSchedule> schedule;
  if (doc.is_object() && doc.contains("system")) {
    schedule = reglab::ParseScenario(doc).schedule;
  } else {
    schedule = reglab::ScheduleFromJson(doc, nullptr, "");
  }
  const reglab::DwellCheck check = reglab::CheckDwell(*schedule, spec);
  const reglab::SwitchTimes sw = reglab::GetSwitchTimes(*schedule);
  Json out = {{"n0", n0},
              {"phi", phi},
              {"switch_times", sw.times},
              {"horizon", sw.end},
              {"admissible", check.admissible}};
  if (check.violation) out["violation"] = {check.violation->first, check.violation->second};
  std::cout << reglab::DumpJson(out) << '\n';
  if (!check.admissible) {
    return ReportFailures({"dwell: interval [" + std::to_string(check.violation->first) + ", " +
                           std::to_string(check.violation->second) + "]"});
  }
  return 0;
}

int VerifyBounds(const std::string& config_path, std::optional<int> n0, std::optional<double> phi) {
  Json config = reglab::ReadJsonFile(config_path);
  if (!config.is_object()) throw reglab::ConfigError("", "configuration must be a JSON object");
  Json& bounds = config["analysis"]["bounds"];
  if (!bounds.is_object()) bounds = Json::object();
  if (n0) bounds["n0"] = *n0;
  if (phi) bounds["phi"] = *phi;
  const reglab::Scenario sc = reglab::ParseScenario(config);
  const reglab::RunResult run = reglab::RunScenario(sc, true);
  Json out = {{"name", run.report["name"]},
              {"regret", run.report["regret"]},
              {"bounds", run.report["bounds"]},
              {"checks", run.report["checks"]},
              {"passed", run.passed}};
  std::cout << reglab::DumpJson(out) << '\n';
  return ReportFailures(run.failures);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reglab: dynamic regret and closed-loop stability experiments"};
  app.require_subcommand(1);

  std::string config;
  std::string trace;
  std::string report;

  auto* simulate = app.add_subcommand("simulate", "Run a scenario configuration");
  simulate->add_option("config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--trace", trace, "Write the CSV trace here (overrides outputs.trace)");
  simulate->add_option("--report", report, "Write the JSON report here (overrides outputs.report)");

  auto* analyze = app.add_subcommand("analyze", "Re-analyze a persisted trace");
  analyze->add_option("config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
  analyze->add_option("--trace", trace, "CSV trace")->required()->check(CLI::ExistingFile);
  analyze->add_option("--report", report, "Write the JSON report here");

  std::string name;
  std::string out_dir;
  std::vector<std::uint64_t> seeds;
  auto* reproduce = app.add_subcommand("reproduce", "Run a built-in reproduction");
  reproduce->add_option("name", name, "example1-baseline | example1-improved | example2 | all")
      ->required();
  reproduce->add_option("--out-dir", out_dir, "Write traces, reports and configs here");
  reproduce->add_option("--seeds", seeds, "Seeds for the switching runs")->delimiter(',');

  std::string axis;
  std::string values;
  std::string out;
  auto* sweep = app.add_subcommand("sweep", "Run a configuration over a parameter axis");
  sweep->add_option("config", config, "Base scenario JSON")->required()->check(CLI::ExistingFile);
  sweep->add_option("--axis", axis, "JSON pointer of the swept value")->required();
  sweep->add_option("--values", values, "Comma-separated values (JSON literals)")->required();
  sweep->add_option("--out", out, "Write the aggregate CSV here (default: stdout)");

  int n0 = 0;
  double phi = 1.0;
  auto* dwell = app.add_subcommand("dwell-check", "Check a schedule against (N0, phi)");
  dwell->add_option("schedule", config, "Schedule or scenario JSON")
      ->required()
      ->check(CLI::ExistingFile);
  dwell->add_option("--n0", n0, "Chatter bound")->required();
  dwell->add_option("--phi", phi, "Average dwell time")->required();

  std::optional<int> vb_n0;
  std::optional<double> vb_phi;
  auto* verify = app.add_subcommand("verify-bounds", "Compare the regret bound with a run");
  verify->add_option("config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--n0", vb_n0, "Chatter bound (default: from the generator)");
  verify->add_option("--phi", vb_phi, "Average dwell time (default: from the generator)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*simulate) return Simulate(config, trace, report);
    if (*analyze) return Analyze(config, trace, report);
    if (*reproduce) return Reproduce(name, out_dir, seeds);
    if (*sweep) return Sweep(config, axis, values, out);
    if (*dwell) return DwellCheck(config, n0, phi);
    if (*verify) return VerifyBounds(config, vb_n0, vb_phi);
  } catch (const reglab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const reglab::RolloutError& e) {
    std::cerr << "runtime error at step " << e.step() << ": " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}
