#include "reglab/trace_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace reglab {

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void AppendVector(std::string& line, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    line += ',';
    line += FormatDouble(v(i));
  }
}

void AppendEmpty(std::string& line, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) line += ',';
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double ParseDouble(const std::string& s, std::size_t line_no) {
  if (s.empty()) throw std::runtime_error("trace line " + std::to_string(line_no) + ": empty cell");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  // Underflow to a subnormal still round-trips exactly; only overflow is an error.
  const bool overflow = errno == ERANGE && std::isinf(v);
  if (end != s.c_str() + s.size() || overflow) {
    throw std::runtime_error("trace line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

void WriteTrace(std::ostream& os, const Trajectory& traj, const CostSchedule& schedule) {
  if (traj.x.empty() || traj.u.empty()) throw std::invalid_argument("empty trajectory");
  const Eigen::Index n = traj.x.front().size();
  const Eigen::Index m = traj.u.front().size();
  std::string line = "t";
  for (Eigen::Index i = 0; i < n; ++i) line += ",x[" + std::to_string(i) + "]";
  for (Eigen::Index i = 0; i < m; ++i) line += ",u[" + std::to_string(i) + "]";
  for (Eigen::Index i = 0; i < n; ++i) line += ",theta[" + std::to_string(i) + "]";
  for (Eigen::Index i = 0; i < m; ++i) line += ",eta[" + std::to_string(i) + "]";
  line += ",loss,regret_cum\n";
  os << line;

  for (std::size_t t = 0; t < traj.u.size(); ++t) {
    const SteadyStatePair& z = schedule.SteadyAt(static_cast<TimeIndex>(t));
    line = std::to_string(t);
    AppendVector(line, traj.x[t]);
    AppendVector(line, traj.u[t]);
    AppendVector(line, z.theta);
    AppendVector(line, z.eta);
    line += ',' + FormatDouble(traj.loss[t]) + ',' + FormatDouble(traj.regret_cum[t]) + '\n';
    os << line;
  }
  line = std::to_string(traj.u.size());
  AppendVector(line, traj.x[traj.u.size()]);
  AppendEmpty(line, 2 * m + n + 2);
  os << line << '\n';
}

void WriteTraceFile(const std::string& path, const Trajectory& traj, const CostSchedule& schedule) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  WriteTrace(os, traj, schedule);
  if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

TraceData ReadTrace(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("trace is empty");
  const std::vector<std::string> header = SplitCsv(line);
  int n = 0;
  int m = 0;
  for (const std::string& h : header) {
    if (h.rfind("x[", 0) == 0) ++n;
    if (h.rfind("u[", 0) == 0) ++m;
  }
  const std::size_t cols = 1 + 2 * static_cast<std::size_t>(n + m) + 2;
  if (n == 0 || m == 0 || header.size() != cols || header.front() != "t" ||
      header[cols - 2] != "loss" || header.back() != "regret_cum") {
    throw std::runtime_error("trace header is not in the expected format");
  }

  TraceData data;
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells = SplitCsv(line);
    if (cells.size() != cols) {
      throw std::runtime_error("trace line " + std::to_string(line_no) + ": expected " +
                               std::to_string(cols) + " cells");
    }
    const auto t = static_cast<std::size_t>(ParseDouble(cells[0], line_no));
    if (t != rows.size()) {
      throw std::runtime_error("trace line " + std::to_string(line_no) + ": time out of order");
    }
    rows.push_back(std::move(cells));
  }
  if (rows.size() < 2) throw std::runtime_error("trace has fewer than two rows");

  const std::size_t steps = rows.size() - 1;
  Trajectory& traj = data.traj;
  traj.horizon = static_cast<TimeIndex>(steps) - 1;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& c = rows[r];
    const std::size_t ln = r + 2;
    Vector x(n);
    for (int i = 0; i < n; ++i) x(i) = ParseDouble(c[1 + i], ln);
    traj.x.push_back(std::move(x));
    if (r == steps) {
      for (std::size_t k = 1 + n; k < cols; ++k) {
        if (!c[k].empty()) {
          throw std::runtime_error("trace line " + std::to_string(ln) + ": final row holds x only");
        }
      }
      break;
    }
    Vector u(m);
    Vector theta(n);
    Vector eta(m);
    std::size_t k = 1 + n;
    for (int i = 0; i < m; ++i) u(i) = ParseDouble(c[k++], ln);
    for (int i = 0; i < n; ++i) theta(i) = ParseDouble(c[k++], ln);
    for (int i = 0; i < m; ++i) eta(i) = ParseDouble(c[k++], ln);
    traj.u.push_back(std::move(u));
    data.theta.push_back(std::move(theta));
    data.eta.push_back(std::move(eta));
    traj.loss.push_back(ParseDouble(c[k++], ln));
    traj.regret_cum.push_back(ParseDouble(c[k++], ln));
  }
  return data;
}

TraceData ReadTraceFile(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open trace '" + path + "'");
  return ReadTrace(is);
}

}  // namespace reglab
