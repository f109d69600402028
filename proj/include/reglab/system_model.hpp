#pragma once

#include <functional>
#include <optional>
#include <string>

#include "reglab/types.hpp"

namespace reglab {

/// Input/state pair (eta, theta) with theta = f(theta, eta).
struct SteadyStatePair {
  Vector eta;
  Vector theta;
};

/// Discrete-time plant x_{t+1} = f(x_t, u_t).
///
/// Three forms are supported: the integrator x + u, a linear map Ax + Bu, and
/// a user-supplied transition function. Instances are immutable and cheap to
/// copy (the custom map is held by shared function object).
class SystemModel {
 public:
  enum class Kind { kIntegrator, kLinear, kCustom };
  using TransitionFn = std::function<Vector(const Vector& x, const Vector& u)>;

  static SystemModel Integrator(int dim);
  static SystemModel Linear(Matrix a, Matrix b);
  static SystemModel Custom(int state_dim, int input_dim, TransitionFn f);

  Kind kind() const { return kind_; }
  int state_dim() const { return state_dim_; }
  int input_dim() const { return input_dim_; }

  /// Only meaningful for Kind::kLinear.
  const Matrix& A() const { return a_; }
  const Matrix& B() const { return b_; }

  /// f(x, u). Throws DimensionError when sizes disagree with the model.
  Vector Step(const Vector& x, const Vector& u) const;

  /// Input eta with theta = f(theta, eta), when one exists and can be found in
  /// closed form (integrator: zero; linear: least-squares solve of
  /// B eta = (I - A) theta followed by a residual check). Custom maps return
  /// nullopt.
  std::optional<Vector> SolveSteadyInput(const Vector& theta, double tol = kSteadyStateTol) const;

  std::string Describe() const;

 private:
  SystemModel(Kind kind, int n, int m) : kind_(kind), state_dim_(n), input_dim_(m) {}

  Kind kind_;
  int state_dim_;
  int input_dim_;
  Matrix a_;
  Matrix b_;
  TransitionFn f_;
};

/// True iff ||f(theta, eta) - theta|| <= tol.
bool ValidateSteadyState(const SystemModel& system, const SteadyStatePair& pair,
                         double tol = kSteadyStateTol);

}  // namespace reglab
