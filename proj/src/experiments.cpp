#include "reglab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>

#include "reglab/bounds.hpp"
#include "reglab/trace_io.hpp"

namespace reglab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr TimeIndex kReproductionHorizon = 1000;

Json Segment(double theta, double eta) {
  return {{"start", 0}, {"theta", {theta}}, {"eta", {eta}}, {"p", 1}, {"q", 1.0}, {"r", 1.0}};
}

Json Targets(const std::vector<double>& thetas) {
  Json out = Json::array();
  for (double th : thetas) out.push_back({{"theta", {th}}, {"eta", "solve"}});
  return out;
}

std::string RunName(const std::string& name, std::optional<std::uint64_t> seed) {
  return seed ? name + "-seed" + std::to_string(*seed) : name + "-constant";
}

void AddCheck(Json& checks, const std::string& name, bool passed, const std::string& detail) {
  checks.push_back({{"name", name}, {"passed", passed}, {"detail", detail}});
}

double HarmonicNumber(TimeIndex n) {
  double h = 0.0;
  for (TimeIndex i = n; i >= 1; --i) h += 1.0 / static_cast<double>(i);
  return h;
}

}  // namespace

const std::vector<std::string>& ReproductionNames() {
  static const std::vector<std::string> names = {"example1-baseline", "example1-improved",
                                                 "example2"};
  return names;
}

std::vector<std::uint64_t> DefaultSeeds() { return {1, 2, 3, 4, 5, 6, 7, 8}; }

Json ReproductionConfig(const std::string& name, std::optional<std::uint64_t> seed) {
  Json c;
  c["name"] = RunName(name, seed);
  c["x0"] = {1.0};
  c["horizon"] = kReproductionHorizon;
  if (name == "example1-baseline" || name == "example1-improved") {
    const bool baseline = name == "example1-baseline";
    c["system"] = {{"kind", "integrator"}, {"dim", 1}};
    c["controller"] = name;
    c["analysis"] = {{"certify", {{"grid", {{0.5}, {1.0}, {2.0}}}, {"t_max", 200}}}};
    if (!seed) {
      c["schedule"] = {{"segments", {Segment(0.0, 0.0)}}};
      c["analysis"]["summability"] = {
          {"base", 125}, {"count", 5}, {"expect", baseline ? "diverging" : "bounded"}};
      c["analysis"]["bounds"] = {
          {"n0", 2}, {"phi", 4.0}, {"expect", baseline ? "unavailable" : "available"}};
    } else {
      c["schedule"] = {{"generator",
                        {{"seed", *seed},
                         {"n0", 2},
                         {"phi", 4.0},
                         {"targets", Targets({0.0, 1.0, -1.0, 2.0})},
                         {"p", 1},
                         {"q", 1.0},
                         {"r", 1.0}}}};
      c["analysis"]["bounds"] = {{"expect", baseline ? "unavailable" : "available"}};
    }
    return c;
  }
  if (name == "example2") {
    c["system"] = {{"kind", "linear"}, {"A", {{0.5}}}, {"B", {{1.0}}}};
    c["controller"] = {{"kind", "linear-feedback"}, {"K", {{-0.3}}}};
    c["prior"] = "first-segment";
    c["analysis"] = {{"certify", {{"grid", {{0.5}, {1.0}, {2.0}}}, {"t_max", 200}}}};
    if (!seed) {
      c["schedule"] = {{"segments", {Segment(0.0, 0.0)}}};
      c["analysis"]["summability"] = {{"base", 125}, {"count", 5}, {"expect", "bounded"}};
      c["analysis"]["bounds"] = {{"n0", 2}, {"phi", 2.0}};
    } else {
      c["schedule"] = {{"generator",
                        {{"seed", *seed},
                         {"n0", 2},
                         {"phi", 2.0},
                         {"targets", Targets({0.0, 5.0, -3.0, 1.0})},
                         {"p", 1},
                         {"q", 1.0},
                         {"r", 1.0}}}};
      c["analysis"]["bounds"] = Json::object();
    }
    return c;
  }
  throw ConfigError("", "unknown reproduction '" + name + "'");
}

Json ReproductionResult::Summary() const {
  Json runs_json = Json::array();
  for (const ReproductionRun& r : runs) {
    Json row = {{"name", r.report["name"]}, {"regret", r.report["regret"]}, {"passed", r.passed}};
    if (r.report.contains("bounds") && r.report["bounds"].contains("report")) {
      row["bound"] = r.report["bounds"]["report"]["total"];
    }
    if (r.report.contains("summability")) row["summability"] = r.report["summability"]["verdict"];
    runs_json.push_back(std::move(row));
  }
  return {{"name", name}, {"runs", runs_json}, {"checks", checks}, {"passed", passed}};
}

std::vector<std::string> ReproductionResult::Failures() const {
  std::vector<std::string> out;
  for (const ReproductionRun& r : runs) {
    for (const std::string& f : FailedChecks(r.report)) {
      out.push_back(r.report["name"].get<std::string>() + ": " + f);
    }
  }
  for (const std::string& f : FailedChecks(Json{{"checks", checks}})) out.push_back(name + ": " + f);
  return out;
}

ReproductionResult Reproduce(const std::string& name, const ReproduceOptions& options) {
  const auto& names = ReproductionNames();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw ConfigError("", "unknown reproduction '" + name + "'");
  }
  ReproductionResult result;
  result.name = name;

  std::vector<std::optional<std::uint64_t>> seeds = {std::nullopt};
  if (name != "example1-baseline") {
    for (std::uint64_t s : options.seeds) seeds.emplace_back(s);
  }
  if (!options.out_dir.empty()) std::filesystem::create_directories(options.out_dir);

  for (const auto& seed : seeds) {
    Json config = ReproductionConfig(name, seed);
    if (!options.out_dir.empty()) {
      const std::string stem = options.out_dir + "/" + config["name"].get<std::string>();
      config["outputs"] = {{"trace", stem + ".trace.csv"}, {"report", stem + ".report.json"}};
      WriteJsonFile(stem + ".config.json", config);
    }
    // Reproductions pin their seeds; REGLAB_SEED only affects user configs.
    const Scenario sc = ParseScenario(config, false);
    RunResult run = RunScenario(sc, true);
    result.runs.push_back(ReproductionRun{config, std::move(run.report), run.passed});
  }

  const Json& base = result.runs.front().report;
  if (name == "example1-baseline") {
    const double closed = 2.0 + HarmonicNumber(kReproductionHorizon) -
                          1.0 / static_cast<double>(kReproductionHorizon + 1);
    const double regret = base["regret"].get<double>();
    AddCheck(result.checks, "regret_closed_form", std::abs(regret - closed) <= 1e-9,
             FormatDouble(regret) + " vs " + FormatDouble(closed));
    const double growth = base["summability"]["regret_growth_per_doubling"].get<double>();
    AddCheck(result.checks, "regret_growth_per_doubling", growth >= 0.68 && growth <= 0.71,
             FormatDouble(growth));
  } else if (name == "example1-improved") {
    const double limit = 2.0 + kPi * kPi / 6.0;
    const double regret = base["regret"].get<double>();
    AddCheck(result.checks, "regret_below_limit", regret <= limit,
             FormatDouble(regret) + " <= " + FormatDouble(limit));
  } else {
    const Json& rate = base["declared"]["rate"];
    const double c = rate["k"].get<double>();
    const double lambda = rate["lambda"].get<double>();
    AddCheck(result.checks, "spectral_envelope", c == 1.0 && std::abs(lambda - 0.2) <= 1e-12,
             "c = " + FormatDouble(c) + ", lambda = " + FormatDouble(lambda));
    const double phi_min = MinDwellExponential(c, lambda, 2.0);
    const double phi = base["bounds"]["phi"].get<double>();
    AddCheck(result.checks, "dwell_at_least_minimum", phi >= phi_min,
             "phi = " + FormatDouble(phi) + ", minimum " + FormatDouble(phi_min));
  }

  result.passed = result.Failures().empty();
  return result;
}

std::vector<SweepRow> Sweep(const Json& base, const std::string& axis,
                            const std::vector<Json>& values) {
  Json::json_pointer ptr;
  try {
    ptr = Json::json_pointer(axis);
  } catch (const Json::exception& e) {
    throw ConfigError(axis, std::string("invalid JSON pointer: ") + e.what());
  }
  if (ptr.empty()) throw ConfigError(axis, "axis must name a value inside the configuration");
  const Json::json_pointer parent = ptr.parent_pointer();
  if (!base.contains(parent) || !(base[parent].is_object() || base[parent].is_array())) {
    throw ConfigError(axis, "axis does not resolve in the base configuration");
  }

  std::vector<SweepRow> rows;
  for (const Json& v : values) {
    SweepRow row;
    row.value = v;
    try {
      Json cfg = base;
      cfg[ptr] = v;
      cfg.erase("outputs");
      const Scenario sc = ParseScenario(cfg);
      const RunResult run = RunScenario(sc, false);
      row.regret = run.report["regret"].get<double>();
      if (run.report.contains("bounds") && run.report["bounds"].contains("report")) {
        row.bound = run.report["bounds"]["report"]["total"].get<double>();
        row.margin = *row.bound - *row.regret;
      }
      if (run.passed) {
        row.status = "pass";
      } else {
        row.status = "fail:";
        for (const std::string& f : run.failures) row.status += " " + f.substr(0, f.find(':')) + ";";
      }
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void WriteSweepCsv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "value,regret,bound,margin,status\n";
  auto opt = [](const std::optional<double>& v) { return v ? FormatDouble(*v) : std::string(); };
  for (const SweepRow& r : rows) {
    std::string status = r.status;
    for (char& ch : status) {
      if (ch == ',' || ch == '\n' || ch == '"') ch = ';';
    }
    std::string value = r.value.is_string() ? r.value.get<std::string>() : r.value.dump();
    for (char& ch : value) {
      if (ch == ',') ch = ';';
    }
    os << value << ',' << opt(r.regret) << ',' << opt(r.bound) << ',' << opt(r.margin) << ','
       << status << '\n';
  }
}

}  // namespace reglab
