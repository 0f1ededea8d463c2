#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "banditkit/core.hpp"
#include "banditkit/policies.hpp"

namespace banditkit {

// All logarithms are natural. Horizons are taken as doubles so curves can be
// evaluated off the integer grid (n = e, ...).

/// KL(Ber(p) || Ber(q)) with 0 log 0 = 0; +inf when q in {0,1} and q != p.
double kl_bernoulli(double p, double q) noexcept;

/// inf KL(nu_k, nu') over Bernoulli nu' with mean above mu*, which by
/// continuity is kl_bernoulli(mu_k, mu*). Arm k (0-based) must be a
/// suboptimal Bernoulli arm. Throws UnsupportedFamily for other laws,
/// InfiniteDivergence when mu* = 1, ContractViolation when k is optimal.
double dk_bernoulli(const Environment& env, std::size_t k);

/// log(1/(1-gap)): upper bound on D_k for the (delta_0, delta_gap) environment.
double dk_twopoint_upper(double gap);

/// (rho / gap^2) log n + 1: bound on the suboptimal count of UCB(rho) in a
/// two-Dirac environment.
double prop1_count_bound(double rho, double gap, double n);

/// h(t) = (rho/gap^2) log t (1 + sqrt(2 rho log t / ((t-1) gap^2)))^-2, t > 1.
double prop2_h(double rho, double gap, double t);

/// h'(t) by central differences with step 1e-3 * t.
double prop2_h_derivative(double rho, double gap, double t);

/// f(n) = int_2^n min(h'(s), 1) ds - h(2), integrated with the trapezoid rule
/// on the integer grid. Tabulates f(2..n_max) once; lookups are O(1).
class Prop2LowerBound {
 public:
  Prop2LowerBound(double rho, double gap, std::uint64_t n_max);

  double operator()(std::uint64_t n) const;
  std::uint64_t n_max() const noexcept { return static_cast<std::uint64_t>(table_.size()) + 1; }

 private:
  std::vector<double> table_;  // table_[n - 2] = f(n)
};

/// Single evaluation of f(n); O(n).
double prop2_f(double rho, double gap, std::uint64_t n);

/// sum_{k: gap_k > 0} 4 log n / gap_k
///   + 2 gap_k (log n / log(1/beta) + 1) n^(1 - 2 rho beta) / (1 - 2 rho beta).
/// Requires rho in (0, 1/2), beta in (0,1) and 2 rho beta < 1.
double thm3_regret_bound(const Environment& env, double rho, double beta, double n);

/// One term of the count sum: (1 + log t / log(1/beta)) (e^{-2 beta f_k(t)} + e^{-2 beta f_*(t)}).
double lemma1_summand(const ExplorationFn& f_k, const ExplorationFn& f_star, double beta, double t);

/// u + sum_{t=u+1}^n lemma1_summand(t) with u = ceil(4 f_k(n) / gap_k^2).
double lemma1_count_bound(const ExplorationFn& f_k, const ExplorationFn& f_star, double gap_k,
                          double beta, std::uint64_t n);

/// (1 - alpha) log n / dk, alpha in [0,1), dk in (0, inf).
double lower_curve_alpha(double dk, double alpha, double n);

/// lower_curve_alpha with dk = dk_bernoulli(env, k).
double lower_curve_alpha(const Environment& env, std::size_t k, double alpha, double n);

/// 12 sum_{k: gap_k > 0} log n / gap_k. The guarantee holds for n >= 3; the
/// formula is evaluated for any n > 2.
double ucb1_regret_bound(const Environment& env, double n);

/// f_2(n) / gap^2 + 1.
double dirac_generic_count_bound(const ExplorationFn& f_2, double gap, double n);

struct HannanReport {
  bool passes = false;
  std::vector<std::string> reasons;
};

/// Checks the sufficient conditions for Hannan consistency of UCB with
/// exploration functions `fs`: every f is o(n) (c3 = 0 or e < 1) and
/// eventually above gamma * loglog n for the given gamma > 1/2
/// (c1 >= gamma, or c2 > 0, or c3 > 0 with e > 0).
HannanReport hannan_sufficient(const std::vector<ExplorationFn>& fs, double gamma);

/// Gaussian tail approximation of the probability that the best arm trails
/// after s pulls each: (1/sqrt(2 pi)) (sigma / (gap sqrt s)) exp(-gap^2 s / (2 sigma^2)),
/// clamped to [0,1].
double etc_tail_probability(double gap, double sigma, std::uint64_t s);

/// Two-arm ETC regret estimate gap * s + p * gap * (n - 2s). Requires n >= 2s.
double etc_regret_estimate(double gap, double sigma, std::uint64_t s, double n);

enum class BoundKind {
  Prop1Count,
  Prop2H,
  Prop2Lower,
  Thm3Regret,
  Lemma1Count,
  LowerCurveAlpha,
  Ucb1Regret,
  DiracGenericCount,
  EtcEstimate,
};

std::string_view to_string(BoundKind kind) noexcept;

/// An analytic curve n -> value, tagged with the statement it evaluates and
/// a human-readable parameter string (semicolon separated, no commas).
struct BoundCurve {
  BoundKind kind;
  std::string params;
  std::uint64_t n_min = 1;
  std::function<double(std::uint64_t)> eval;

  double operator()(std::uint64_t n) const { return eval(n); }
};

BoundCurve prop1_curve(double rho, double gap);
BoundCurve prop2_h_curve(double rho, double gap);
BoundCurve prop2_lower_curve(double rho, double gap, std::uint64_t n_max);
BoundCurve thm3_curve(const Environment& env, double rho, double beta);
BoundCurve lemma1_curve(const ExplorationFn& f_k, const ExplorationFn& f_star, double gap_k,
                        double beta);
BoundCurve lower_alpha_curve(const Environment& env, std::size_t k, double alpha);
BoundCurve ucb1_curve(const Environment& env);
BoundCurve dirac_generic_curve(const ExplorationFn& f_2, double gap);
BoundCurve etc_curve(double gap, double sigma, std::uint64_t s);

}  // namespace banditkit
