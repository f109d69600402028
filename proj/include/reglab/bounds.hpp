#pragma once

#include <cstdint>
#include <vector>

#include "reglab/cost_schedule.hpp"
#include "reglab/rate_certificate.hpp"
#include "reglab/types.hpp"

namespace reglab {

/// M >= sum_{t >= 0} sigma(t). Closed form for the analytic families; for
/// empirical tables the sum plus a geometric tail extrapolated from the last
/// quarter of the table. Throws BoundError for 1/t or when the tail cannot be
/// bounded (sigma(t_max) > tail_tol or no contraction).
double SigmaSum(const RateCertificate& cert, double tail_tol = 1e-6);

/// Limits for the switch-sequence enumeration.
struct EnumerationLimits {
  TimeIndex horizon_cap = 200;
  int max_switches = 12;
  std::uint64_t node_budget = 200'000'000;
};

/// Result of a maximization over admissible switch sequences 0 = t_0 < ... < t_N'.
///
/// A sequence is admissible when every pair a < b satisfies
///   b - a < N0 + (t_b - t_a) / phi,
/// i.e. t_b - t_a > phi (b - a - N0). This pairwise form is invariant under
/// shifting the sequence.
struct SequenceMax {
  double value = 0.0;
  std::vector<TimeIndex> witness;  // t_0..t_N' attaining `value`
  bool exhaustive = true;          // false when the node budget ran out (lower bound only)
  bool feasible = true;            // false when no sequence fits under the horizon cap
  std::uint64_t nodes = 0;
};

/// Admissibility of a complete sequence under the pairwise condition above.
bool SequenceAdmissible(const std::vector<TimeIndex>& times, const DwellSpec& spec);

/// max over admissible sequences with exactly `switches` gaps of
/// prod_{j=1}^{switches} k sigma(t_j - t_{j-1}).
SequenceMax MaxSwitchProduct(double k, const RateCertificate& cert, const DwellSpec& spec,
                             int switches, const EnumerationLimits& limits = {});

/// max over admissible sequences of sum_{i=0}^{N'} prod_{j=1}^{i} k sigma(t_j - t_{j-1}).
SequenceMax BruteForceSumProduct(double k, const RateCertificate& cert, const DwellSpec& spec,
                                 int n_prime, const EnumerationLimits& limits = {});

struct DeltaResult {
  double delta = 0.0;
  int switches = 0;  // N'' attaining the max
  std::vector<TimeIndex> witness;
  bool exhaustive = true;
  bool below_one() const { return delta < 1.0; }
};

/// Largest product over N'' in [N0 + 1, 2 N0 + 1] switches. Never throws on
/// delta >= 1; see DeltaBar.
DeltaResult MaxWindowProduct(double k, const RateCertificate& cert, const DwellSpec& spec,
                             const EnumerationLimits& limits = {});

/// As MaxWindowProduct, but throws BoundError ("increase phi", with the
/// witness) when delta >= 1.
DeltaResult DeltaBar(double k, const RateCertificate& cert, const DwellSpec& spec,
                     const EnumerationLimits& limits = {});

/// sum_{i=0}^{n} k^i.
double GeometricSum(double k, int n);

/// C_N0 = sum_{i=0}^{N0} k^i.
double ChatterConstant(double k, int n0);

/// P = (1 - k^{2N0+1}) / (1 - k) + (N0 + 1) / (1 - delta), with the first term
/// read as 2 N0 + 1 at k = 1. Throws BoundError unless 0 <= delta < 1 and k >= 1.
double SumProductConstant(double k, double delta, int n0);

/// phi_min = -ln(c) / ln(lambda) + phi0. Throws BoundError unless lambda in (0, 1),
/// c >= 1 and phi0 > 0.
double MinDwellExponential(double c, double lambda, double phi0);

/// k^{N0} lambda^{-phi0 N0} / (1 - lambda^{phi0}), the closed-form sum-product
/// bound for geometric rates at phi >= MinDwellExponential(k, lambda, phi0).
double ExponentialSumProductBound(double k, double lambda, double phi0, int n0);

struct RegretBoundInputs {
  double l = 0.0;  // Lipschitz constant of the costs
  double k = 1.0;
  double M = 0.0;
  int n0 = 0;
  double P = 0.0;
  double delta = 0.0;  // informational
  double k_u = 0.0;
  double k_zeta = 0.0;
  Vector x0;
  Vector x1;
  Vector theta0;
  PathLength path;
};

struct BoundReport {
  double M = 0.0;
  double delta = 0.0;
  double P = 0.0;
  double C_N0 = 0.0;
  double C_hat = 0.0;
  double C0 = 0.0;
  double C_eta = 0.0;
  double C_theta = 0.0;
  double C_const = 0.0;
  double l = 0.0;
  double k = 0.0;
  double k_u = 0.0;
  double k_zeta = 0.0;
  double path_theta = 0.0;
  double path_eta = 0.0;
  double sum_x_bound = 0.0;
  double sum_u_bound = 0.0;
  double total = 0.0;
};

/// Assembles the regret bound
///   sum_x <= C0 + (1 + C_hat) PL_theta
///   sum_u <= k_u C0 + (1 + k_zeta) PL_eta + (k_u (2 + C_hat) + k_zeta) PL_theta
///   total = l (sum_x + sum_u) = C_eta PL_eta + C_theta PL_theta + C_const
/// with C_hat = k M max(C_N0, P) and C0 = ||x0 - theta0|| + C_hat ||x1 - theta0||.
BoundReport AssembleRegretBound(const RegretBoundInputs& in);

/// Full chain for a certified controller: M from the rate, delta by enumeration,
/// P, then AssembleRegretBound. Throws BoundError when any step is inapplicable.
struct CertificationInputs {
  double l = 0.0;
  RateCertificate rate;
  DwellSpec dwell;
  double k_u = 0.0;
  double k_zeta = 0.0;
  Vector x0;
  Vector x1;
  Vector theta0;
  PathLength path;
  EnumerationLimits limits;
};

BoundReport CertifyRegretBound(const CertificationInputs& in);

}  // namespace reglab
