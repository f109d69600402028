#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace reglab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Discrete time index. Negative values appear only for controller priors.
using TimeIndex = std::int64_t;

/// Absolute residual accepted for ||f(theta, eta) - theta||.
inline constexpr double kSteadyStateTol = 1e-9;

/// Raised when a vector or matrix does not have the size an operation needs.
/// `dimension()` names the offending quantity (e.g. "x", "u", "B.cols").
class DimensionError : public std::invalid_argument {
 public:
  DimensionError(std::string dimension, long expected, long actual)
      : std::invalid_argument("dimension mismatch in '" + dimension + "': expected " +
                              std::to_string(expected) + ", got " + std::to_string(actual)),
        dimension_(std::move(dimension)),
        expected_(expected),
        actual_(actual) {}

  const std::string& dimension() const { return dimension_; }
  long expected() const { return expected_; }
  long actual() const { return actual_; }

 private:
  std::string dimension_;
  long expected_;
  long actual_;
};

class ScheduleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A closed-loop simulation failed at a specific time step.
class RolloutError : public std::runtime_error {
 public:
  RolloutError(TimeIndex step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  TimeIndex step() const { return step_; }

 private:
  TimeIndex step_;
};

/// A bound or certificate cannot be produced (non-summable rate, delta >= 1, ...).
class BoundError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input bound ||u_t - eta_{t-1}|| <= k_u ||x_t - theta_{t-1}|| + k_zeta ||dzeta||
/// cannot hold for any finite constants.
class AssumptionViolation : public std::runtime_error {
 public:
  AssumptionViolation(TimeIndex step, const std::string& what)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  TimeIndex step() const { return step_; }

 private:
  TimeIndex step_;
};

inline void ExpectSize(const std::string& name, long expected, long actual) {
  if (expected != actual) throw DimensionError(name, expected, actual);
}

}  // namespace reglab
