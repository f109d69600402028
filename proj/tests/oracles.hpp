#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library under test beyond plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace reglab::testing {

/// H_n accumulated in long double from the small terms up.
inline long double HarmonicNumber(std::int64_t n) {
  long double h = 0.0L;
  for (std::int64_t i = n; i >= 1; --i) h += 1.0L / static_cast<long double>(i);
  return h;
}

/// Regret of the harmonic-gain loop on the scalar integrator with x0 = 1,
/// theta = 0 and cost |x| + |u|: 2 + H_T - 1/(T + 1).
inline long double BaselineRegretClosedForm(std::int64_t horizon) {
  return 2.0L + HarmonicNumber(horizon) - 1.0L / static_cast<long double>(horizon + 1);
}

/// Every integer interval [a, b] of [0, horizon]: number of switch times in it
/// must be strictly below n0 + (b - a) / phi.
inline bool DwellBruteForce(const std::vector<std::int64_t>& switches, std::int64_t horizon,
                            int n0, double phi) {
  for (std::int64_t a = 0; a <= horizon; ++a) {
    for (std::int64_t b = a; b <= horizon; ++b) {
      std::int64_t count = 0;
      for (std::int64_t s : switches) count += (s >= a && s <= b) ? 1 : 0;
      if (!(static_cast<double>(count) < n0 + static_cast<double>(b - a) / phi)) return false;
    }
  }
  return true;
}

/// Pairwise admissibility of 0 = t_0 < ... < t_N: t_b - t_a > phi (b - a - n0).
inline bool PairwiseAdmissible(const std::vector<std::int64_t>& t, int n0, double phi) {
  for (std::size_t a = 0; a < t.size(); ++a) {
    for (std::size_t b = a + 1; b < t.size(); ++b) {
      if (t[b] <= t[a]) return false;
      const double need = phi * (static_cast<double>(b - a) - n0);
      if (!(static_cast<double>(t[b] - t[a]) > need)) return false;
    }
  }
  return true;
}

/// Calls `visit` on every admissible sequence with `n` gaps and t_n <= cap.
inline void EnumerateSequences(int n, int n0, double phi, std::int64_t cap,
                               const std::function<void(const std::vector<std::int64_t>&)>& visit) {
  std::vector<std::int64_t> t = {0};
  std::function<void()> rec = [&]() {
    if (static_cast<int>(t.size()) == n + 1) {
      if (PairwiseAdmissible(t, n0, phi)) visit(t);
      return;
    }
    for (std::int64_t c = t.back() + 1; c <= cap; ++c) {
      t.push_back(c);
      if (PairwiseAdmissible(t, n0, phi)) rec();
      t.pop_back();
    }
  };
  rec();
}

/// max over admissible sequences of prod_j k sigma(gap_j) (last == true) or of
/// sum_i prod_{j <= i} k sigma(gap_j) (last == false). Returns -1 if none.
inline double EnumeratedMax(double k, const std::function<double(std::int64_t)>& sigma, int n,
                            int n0, double phi, std::int64_t cap, bool last) {
  double best = -1.0;
  EnumerateSequences(n, n0, phi, cap, [&](const std::vector<std::int64_t>& t) {
    double prod = 1.0;
    double sum = 1.0;
    for (std::size_t j = 1; j < t.size(); ++j) {
      prod *= k * sigma(t[j] - t[j - 1]);
      sum += prod;
    }
    best = std::max(best, last ? prod : sum);
  });
  return best;
}

}  // namespace reglab::testing
