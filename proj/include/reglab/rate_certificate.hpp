#pragma once

#include <string>
#include <vector>

#include "reglab/types.hpp"

namespace reglab {

enum class SigmaFamily { kInverseSquare, kInverse, kGeometric, kEmpirical };

/// Convergence-rate certificate ||x_t - theta|| <= k ||x_0 - theta|| sigma(t)
/// with sigma nonincreasing and sigma(0) = 1.
///
/// Analytic families evaluate sigma in closed form. Empirical certificates
/// carry a table sigma(0..t_max) and extend it flat past t_max.
struct RateCertificate {
  double k = 1.0;
  SigmaFamily family = SigmaFamily::kEmpirical;
  double lambda = 0.0;        // kGeometric only
  std::vector<double> table;  // kEmpirical: sigma(0..t_max)

  static RateCertificate InverseSquare(double k = 1.0);
  static RateCertificate Inverse(double k = 1.0);
  static RateCertificate Geometric(double k, double lambda);
  static RateCertificate Empirical(double k, std::vector<double> table);

  double Sigma(TimeIndex t) const;
  /// "1/t^2", "1/t", "geometric(<lambda>)" or "empirical".
  std::string FamilyTag() const;
};

}  // namespace reglab
