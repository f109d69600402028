#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "reglab/cost_schedule.hpp"
#include "reglab/rollout.hpp"

namespace reglab {

/// CSV trace with header
///   t,x[0],..,x[n-1],u[0],..,u[m-1],theta[0],..,eta[0],..,loss,regret_cum
/// and one row per t = 0..T, followed by a row for t = T+1 that carries only
/// x_{T+1}. Numbers use 17 significant digits, so reading a trace back gives
/// the same doubles.
void WriteTrace(std::ostream& os, const Trajectory& traj, const CostSchedule& schedule);
void WriteTraceFile(const std::string& path, const Trajectory& traj, const CostSchedule& schedule);

struct TraceData {
  Trajectory traj;
  std::vector<Vector> theta;  // theta_t, t = 0..T
  std::vector<Vector> eta;    // eta_t, t = 0..T
};

/// Throws std::runtime_error with the line number on malformed input.
TraceData ReadTrace(std::istream& is);
TraceData ReadTraceFile(const std::string& path);

/// Formats a double with 17 significant digits.
std::string FormatDouble(double v);

}  // namespace reglab
