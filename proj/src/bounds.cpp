#include "reglab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace reglab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Pairwise admissibility in the canonical form t_b - t_a > phi (b - a - N0).
bool PairOk(TimeIndex ta, TimeIndex tb, int a, int b, const DwellSpec& spec) {
  return static_cast<double>(tb - ta) > spec.phi * static_cast<double>(b - a - spec.n0);
}

// Smallest integer t_b > t_a with PairOk(t_a, t_b, a, b).
TimeIndex MinTime(TimeIndex ta, int a, int b, const DwellSpec& spec) {
  const double rhs = spec.phi * static_cast<double>(b - a - spec.n0);
  if (rhs < 0.0) return ta + 1;
  TimeIndex tb = ta + static_cast<TimeIndex>(std::floor(rhs)) + 1;
  while (!PairOk(ta, tb, a, b, spec)) ++tb;
  while (tb - 1 > ta && PairOk(ta, tb - 1, a, b, spec)) --tb;
  return tb;
}

// Depth-first branch and bound over admissible sequences, maximizing
// sum_i weight[i] prod_{j<=i} k sigma(t_j - t_{j-1}).
class SequenceSearch {
 public:
  SequenceSearch(double k, const RateCertificate& cert, const DwellSpec& spec, int n_prime,
                 std::vector<double> weight, const EnumerationLimits& limits)
      : k_(k), cert_(cert), spec_(spec), n_(n_prime), weight_(std::move(weight)),
        limits_(limits) {}

  SequenceMax Run() {
    times_.assign(1, 0);
    best_.value = -1.0;
    best_.feasible = false;
    Visit(1.0, weight_[0]);
    if (!best_.feasible) {
      best_.value = 0.0;
      best_.exhaustive = false;
    }
    best_.nodes = nodes_;
    return best_;
  }

 private:
  double Factor(TimeIndex gap) const { return k_ * cert_.Sigma(gap); }

  void Visit(double prefix, double acc) {
    if (++nodes_ > limits_.node_budget) {
      best_.exhaustive = false;
      return;
    }
    const int j = static_cast<int>(times_.size()) - 1;
    if (j == n_) {
      if (!best_.feasible || acc > best_.value) {
        best_.value = acc;
        best_.witness = times_;
        best_.feasible = true;
      }
      return;
    }
    // lim[i]: earliest t_i allowed by the fixed prefix.
    std::vector<TimeIndex> lim(static_cast<std::size_t>(n_) + 1, 0);
    for (int i = j + 1; i <= n_; ++i) {
      TimeIndex m = times_[j] + (i - j);
      for (int a = 0; a <= j; ++a) m = std::max(m, MinTime(times_[a], a, i, spec_));
      lim[i] = m;
    }
    if (lim[n_] > limits_.horizon_cap) return;

    for (TimeIndex c = lim[j + 1]; c <= limits_.horizon_cap - (n_ - j - 1); ++c) {
      if (best_.feasible && !best_.exhaustive) return;
      const TimeIndex gap = c - times_[j];
      const double next = prefix * Factor(gap);
      const double sg = cert_.Sigma(gap);
      double bound = acc + weight_[j + 1] * next;
      double kpow = k_;
      for (int i = j + 2; i <= n_; ++i) {
        kpow *= k_;
        if (weight_[i] == 0.0) continue;
        const TimeIndex span = std::max(lim[i], c + (i - j - 1)) - times_[j];
        const TimeIndex widest = (span + (i - j) - 1) / (i - j);
        bound += weight_[i] * prefix * kpow * std::min(sg, cert_.Sigma(std::max(gap, widest)));
      }
      // The bound is nonincreasing in c, so no later candidate can do better.
      if (best_.feasible && bound <= best_.value) break;

      bool ok = true;
      for (int a = 0; a <= j && ok; ++a) ok = PairOk(times_[a], c, a, j + 1, spec_);
      if (!ok) continue;
      times_.push_back(c);
      Visit(next, acc + weight_[j + 1] * next);
      times_.pop_back();
    }
  }

  double k_;
  const RateCertificate& cert_;
  DwellSpec spec_;
  int n_;
  std::vector<double> weight_;
  EnumerationLimits limits_;
  std::vector<TimeIndex> times_;
  SequenceMax best_;
  std::uint64_t nodes_ = 0;
};

void CheckSearchArgs(double k, const DwellSpec& spec, int n, const EnumerationLimits& limits) {
  spec.Validate();
  if (!(k >= 1.0) || !std::isfinite(k)) throw BoundError("k must be finite and >= 1");
  if (n < 0) throw std::invalid_argument("number of switches must be nonnegative");
  if (n > limits.max_switches) {
    throw BoundError("enumeration cap: " + std::to_string(n) + " switches exceeds the limit of " +
                     std::to_string(limits.max_switches));
  }
  if (limits.horizon_cap < 1) throw std::invalid_argument("horizon cap must be positive");
}

std::string FormatWitness(const std::vector<TimeIndex>& w) {
  std::string s = "[";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(w[i]);
  }
  return s + "]";
}

}  // namespace

double SigmaSum(const RateCertificate& cert, double tail_tol) {
  switch (cert.family) {
    case SigmaFamily::kGeometric:
      if (!(cert.lambda >= 0.0 && cert.lambda < 1.0)) {
        throw BoundError("geometric rate needs lambda in [0, 1)");
      }
      return 1.0 / (1.0 - cert.lambda);
    case SigmaFamily::kInverseSquare:
      return 1.0 + kPi * kPi / 6.0;
    case SigmaFamily::kInverse:
      throw BoundError("not summable: sigma(t) = 1/t has a divergent sum");
    case SigmaFamily::kEmpirical:
      break;
  }
  const std::vector<double>& s = cert.table;
  if (s.empty()) throw BoundError("empirical rate has an empty table");
  const double last = s.back();
  if (last > tail_tol) {
    throw BoundError("not summable within the table: sigma(t_max) = " + std::to_string(last) +
                     " exceeds the tail tolerance");
  }
  double sum = std::accumulate(s.begin(), s.end(), 0.0);
  if (last == 0.0) return sum;
  const std::size_t from = s.size() - std::max<std::size_t>(2, s.size() / 4);
  double ratio = 0.0;
  for (std::size_t t = from; t + 1 < s.size(); ++t) {
    if (s[t] <= 0.0) continue;
    ratio = std::max(ratio, s[t + 1] / s[t]);
  }
  if (!(ratio < 1.0)) throw BoundError("cannot certify the tail of an empirical rate");
  return sum + last * ratio / (1.0 - ratio);
}

bool SequenceAdmissible(const std::vector<TimeIndex>& times, const DwellSpec& spec) {
  if (times.empty() || times.front() != 0) return false;
  for (std::size_t b = 1; b < times.size(); ++b) {
    if (times[b] <= times[b - 1]) return false;
    for (std::size_t a = 0; a < b; ++a) {
      if (!PairOk(times[a], times[b], static_cast<int>(a), static_cast<int>(b), spec)) {
        return false;
      }
    }
  }
  return true;
}

SequenceMax MaxSwitchProduct(double k, const RateCertificate& cert, const DwellSpec& spec,
                             int switches, const EnumerationLimits& limits) {
  CheckSearchArgs(k, spec, switches, limits);
  std::vector<double> weight(static_cast<std::size_t>(switches) + 1, 0.0);
  weight.back() = 1.0;
  return SequenceSearch(k, cert, spec, switches, std::move(weight), limits).Run();
}

SequenceMax BruteForceSumProduct(double k, const RateCertificate& cert, const DwellSpec& spec,
                                 int n_prime, const EnumerationLimits& limits) {
  CheckSearchArgs(k, spec, n_prime, limits);
  std::vector<double> weight(static_cast<std::size_t>(n_prime) + 1, 1.0);
  return SequenceSearch(k, cert, spec, n_prime, std::move(weight), limits).Run();
}

DeltaResult MaxWindowProduct(double k, const RateCertificate& cert, const DwellSpec& spec,
                             const EnumerationLimits& limits) {
  DeltaResult out;
  out.delta = -1.0;
  for (int n = spec.n0 + 1; n <= 2 * spec.n0 + 1; ++n) {
    const SequenceMax r = MaxSwitchProduct(k, cert, spec, n, limits);
    out.exhaustive = out.exhaustive && r.exhaustive;
    if (r.value > out.delta) {
      out.delta = r.value;
      out.switches = n;
      out.witness = r.witness;
    }
  }
  return out;
}

DeltaResult DeltaBar(double k, const RateCertificate& cert, const DwellSpec& spec,
                     const EnumerationLimits& limits) {
  DeltaResult out = MaxWindowProduct(k, cert, spec, limits);
  if (!out.below_one()) {
    throw BoundError("increase phi: product " + std::to_string(out.delta) + " >= 1 over " +
                     std::to_string(out.switches) + " switches at " +
                     FormatWitness(out.witness));
  }
  return out;
}

double GeometricSum(double k, int n) {
  double sum = 0.0;
  double term = 1.0;
  for (int i = 0; i <= n; ++i) {
    sum += term;
    term *= k;
  }
  return sum;
}

double ChatterConstant(double k, int n0) { return GeometricSum(k, n0); }

double SumProductConstant(double k, double delta, int n0) {
  if (!(k >= 1.0)) throw BoundError("P needs k >= 1");
  if (n0 < 0) throw BoundError("P needs N0 >= 0");
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw BoundError("P needs delta in [0, 1), got " + std::to_string(delta));
  }
  const double head = k == 1.0 ? static_cast<double>(2 * n0 + 1)
                               : (1.0 - std::pow(k, 2 * n0 + 1)) / (1.0 - k);
  return head + static_cast<double>(n0 + 1) / (1.0 - delta);
}

double MinDwellExponential(double c, double lambda, double phi0) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw BoundError("lambda must lie in (0, 1)");
  if (!(c >= 1.0)) throw BoundError("c must be >= 1");
  if (!(phi0 > 0.0)) throw BoundError("phi0 must be positive");
  return -std::log(c) / std::log(lambda) + phi0;
}

double ExponentialSumProductBound(double k, double lambda, double phi0, int n0) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw BoundError("lambda must lie in (0, 1)");
  return std::pow(k, n0) * std::pow(lambda, -phi0 * n0) / (1.0 - std::pow(lambda, phi0));
}

BoundReport AssembleRegretBound(const RegretBoundInputs& in) {
  ExpectSize("x1", in.x0.size(), in.x1.size());
  ExpectSize("theta0", in.x0.size(), in.theta0.size());
  BoundReport r;
  r.M = in.M;
  r.delta = in.delta;
  r.P = in.P;
  r.l = in.l;
  r.k = in.k;
  r.k_u = in.k_u;
  r.k_zeta = in.k_zeta;
  r.path_theta = in.path.theta;
  r.path_eta = in.path.eta;

  r.C_N0 = ChatterConstant(in.k, in.n0);
  r.C_hat = in.k * in.M * std::max(r.C_N0, in.P);
  r.C0 = (in.x0 - in.theta0).norm() + r.C_hat * (in.x1 - in.theta0).norm();

  r.sum_x_bound = r.C0 + (1.0 + r.C_hat) * in.path.theta;
  r.sum_u_bound = in.k_u * r.C0 + (1.0 + in.k_zeta) * in.path.eta +
                  (in.k_u * (2.0 + r.C_hat) + in.k_zeta) * in.path.theta;
  r.total = in.l * (r.sum_x_bound + r.sum_u_bound);

  r.C_eta = in.l * (1.0 + in.k_zeta);
  r.C_theta = in.l * ((1.0 + r.C_hat) + in.k_u * (2.0 + r.C_hat) + in.k_zeta);
  r.C_const = in.l * (1.0 + in.k_u) * r.C0;
  return r;
}

BoundReport CertifyRegretBound(const CertificationInputs& in) {
  const double M = SigmaSum(in.rate);
  const DeltaResult delta = DeltaBar(in.rate.k, in.rate, in.dwell, in.limits);
  RegretBoundInputs t;
  t.l = in.l;
  t.k = in.rate.k;
  t.M = M;
  t.n0 = in.dwell.n0;
  t.delta = delta.delta;
  t.P = SumProductConstant(in.rate.k, delta.delta, in.dwell.n0);
  t.k_u = in.k_u;
  t.k_zeta = in.k_zeta;
  t.x0 = in.x0;
  t.x1 = in.x1;
  t.theta0 = in.theta0;
  t.path = in.path;
  return AssembleRegretBound(t);
}

}  // namespace reglab
