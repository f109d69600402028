#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "reglab/json_io.hpp"
#include "reglab/scenario.hpp"

namespace reglab {

/// "example1-baseline", "example1-improved", "example2".
const std::vector<std::string>& ReproductionNames();

/// Seeds used by the switching runs of a reproduction.
std::vector<std::uint64_t> DefaultSeeds();

/// Configuration of one run of a reproduction. `seed` selects a generated
/// switching schedule; without it the cost is constant.
Json ReproductionConfig(const std::string& name, std::optional<std::uint64_t> seed);

struct ReproductionRun {
  Json config;
  Json report;
  bool passed = false;
};

struct ReproductionResult {
  std::string name;
  std::vector<ReproductionRun> runs;
  Json checks = Json::array();
  bool passed = false;

  Json Summary() const;
  std::vector<std::string> Failures() const;
};

struct ReproduceOptions {
  std::vector<std::uint64_t> seeds = DefaultSeeds();
  /// When set, every run writes <out_dir>/<run>.trace.csv, <run>.report.json
  /// and <run>.config.json.
  std::string out_dir;
};

/// Runs all configurations of a reproduction and the checks specific to it.
/// Throws ConfigError for an unknown name.
ReproductionResult Reproduce(const std::string& name, const ReproduceOptions& options = {});

struct SweepRow {
  Json value;
  std::optional<double> regret;
  std::optional<double> bound;
  std::optional<double> margin;
  std::string status;  // "pass", "fail: <checks>" or "error: <message>"
};

/// One run per value with the JSON pointer `axis` set to it. Each row records
/// its own failure; the sweep continues. Throws ConfigError when the axis
/// cannot be resolved in the base configuration.
std::vector<SweepRow> Sweep(const Json& base, const std::string& axis,
                            const std::vector<Json>& values);

/// value,regret,bound,margin,status
void WriteSweepCsv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace reglab
