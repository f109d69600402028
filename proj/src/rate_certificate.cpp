#include "reglab/rate_certificate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace reglab {

RateCertificate RateCertificate::InverseSquare(double k) {
  RateCertificate c;
  c.k = k;
  c.family = SigmaFamily::kInverseSquare;
  return c;
}

RateCertificate RateCertificate::Inverse(double k) {
  RateCertificate c;
  c.k = k;
  c.family = SigmaFamily::kInverse;
  return c;
}

RateCertificate RateCertificate::Geometric(double k, double lambda) {
  RateCertificate c;
  c.k = k;
  c.family = SigmaFamily::kGeometric;
  c.lambda = lambda;
  return c;
}

RateCertificate RateCertificate::Empirical(double k, std::vector<double> table) {
  RateCertificate c;
  c.k = k;
  c.family = SigmaFamily::kEmpirical;
  c.table = std::move(table);
  return c;
}

double RateCertificate::Sigma(TimeIndex t) const {
  if (t <= 0) return 1.0;
  const auto td = static_cast<double>(t);
  switch (family) {
    case SigmaFamily::kInverseSquare:
      return 1.0 / (td * td);
    case SigmaFamily::kInverse:
      return 1.0 / td;
    case SigmaFamily::kGeometric:
      return std::pow(lambda, td);
    case SigmaFamily::kEmpirical:
      if (table.empty()) return 1.0;
      return table[std::min<std::size_t>(static_cast<std::size_t>(t), table.size() - 1)];
  }
  return 1.0;
}

std::string RateCertificate::FamilyTag() const {
  switch (family) {
    case SigmaFamily::kInverseSquare:
      return "1/t^2";
    case SigmaFamily::kInverse:
      return "1/t";
    case SigmaFamily::kGeometric: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "geometric(%.17g)", lambda);
      return buf;
    }
    case SigmaFamily::kEmpirical:
      return "empirical";
  }
  return "empirical";
}

}  // namespace reglab
