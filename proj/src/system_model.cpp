#include "reglab/system_model.hpp"

#include <sstream>

namespace reglab {

SystemModel SystemModel::Integrator(int dim) {
  if (dim <= 0) throw DimensionError("state_dim", 1, dim);
  return SystemModel(Kind::kIntegrator, dim, dim);
}

SystemModel SystemModel::Linear(Matrix a, Matrix b) {
  const long n = a.rows();
  if (n == 0) throw DimensionError("A.rows", 1, 0);
  ExpectSize("A.cols", n, a.cols());
  ExpectSize("B.rows", n, b.rows());
  if (b.cols() == 0) throw DimensionError("B.cols", 1, 0);
  SystemModel model(Kind::kLinear, static_cast<int>(n), static_cast<int>(b.cols()));
  model.a_ = std::move(a);
  model.b_ = std::move(b);
  return model;
}

SystemModel SystemModel::Custom(int state_dim, int input_dim, TransitionFn f) {
  if (state_dim <= 0) throw DimensionError("state_dim", 1, state_dim);
  if (input_dim <= 0) throw DimensionError("input_dim", 1, input_dim);
  if (!f) throw std::invalid_argument("custom system requires a transition function");
  SystemModel model(Kind::kCustom, state_dim, input_dim);
  model.f_ = std::move(f);
  return model;
}

Vector SystemModel::Step(const Vector& x, const Vector& u) const {
  ExpectSize("x", state_dim_, x.size());
  ExpectSize("u", input_dim_, u.size());
  switch (kind_) {
    case Kind::kIntegrator:
      return x + u;
    case Kind::kLinear:
      return a_ * x + b_ * u;
    case Kind::kCustom: {
      Vector next = f_(x, u);
      ExpectSize("f(x,u)", state_dim_, next.size());
      return next;
    }
  }
  return x;  // unreachable
}

std::optional<Vector> SystemModel::SolveSteadyInput(const Vector& theta, double tol) const {
  ExpectSize("theta", state_dim_, theta.size());
  switch (kind_) {
    case Kind::kIntegrator:
      return Vector::Zero(input_dim_);
    case Kind::kLinear: {
      const Vector rhs = theta - a_ * theta;
      Vector eta = b_.completeOrthogonalDecomposition().solve(rhs);
      if ((b_ * eta - rhs).norm() > tol) return std::nullopt;
      return eta;
    }
    case Kind::kCustom:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string SystemModel::Describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::kIntegrator:
      os << "integrator(n=" << state_dim_ << ")";
      break;
    case Kind::kLinear:
      os << "linear(n=" << state_dim_ << ", m=" << input_dim_ << ")";
      break;
    case Kind::kCustom:
      os << "custom(n=" << state_dim_ << ", m=" << input_dim_ << ")";
      break;
  }
  return os.str();
}

bool ValidateSteadyState(const SystemModel& system, const SteadyStatePair& pair, double tol) {
  return (system.Step(pair.theta, pair.eta) - pair.theta).norm() <= tol;
}

}  // namespace reglab
