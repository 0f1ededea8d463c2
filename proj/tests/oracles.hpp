#pragma once

// Test-only reference computations. Nothing here calls into the library's
// bound or policy code, so each oracle is an independent route to the value
// it checks.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

// KL between two laws on the atoms {0, 1}, integrated atom by atom against
// the counting measure: sum_x P(x) (log P(x) - log Q(x)).
inline double kl_two_atoms(double p, double q) {
  const double P[2] = {1.0 - p, p};
  const double Q[2] = {1.0 - q, q};
  double total = 0.0;
  for (int x = 0; x < 2; ++x) {
    if (P[x] == 0.0) continue;
    if (Q[x] == 0.0) return std::numeric_limits<double>::infinity();
    total += P[x] * (std::log(P[x]) - std::log(Q[x]));
  }
  return total;
}

// The peeling summand (log t / log(1/beta) + 1) / t^(2 rho beta).
inline double peeling_summand(double rho, double beta, double t) {
  return (std::log(t) / std::log(1.0 / beta) + 1.0) / std::pow(t, 2.0 * rho * beta);
}

// Two-Dirac UCB with exploration f(t), played round by round from scratch.
// Returns T_2(t) for t = 0..n (index t). Ties go to arm 1.
inline std::vector<std::uint64_t> two_dirac_ucb(double a, double b, const std::function<double(double)>& f,
                                                std::uint64_t n) {
  std::vector<std::uint64_t> t2(n + 1, 0);
  std::uint64_t pulls1 = 0;
  std::uint64_t pulls2 = 0;
  for (std::uint64_t t = 1; t <= n; ++t) {
    bool second;
    if (t == 1) {
      second = false;
    } else if (t == 2) {
      second = true;
    } else {
      const double e = f(static_cast<double>(t));
      const double i1 = a + std::sqrt(e / static_cast<double>(pulls1));
      const double i2 = b + std::sqrt(e / static_cast<double>(pulls2));
      second = i2 > i1;
    }
    (second ? pulls2 : pulls1) += 1;
    t2[t] = pulls2;
  }
  return t2;
}

}  // namespace oracle
