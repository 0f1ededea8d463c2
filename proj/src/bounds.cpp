#include "banditkit/bounds.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include "banditkit/error.hpp"
#include "banditkit/format.hpp"

namespace banditkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

void require_gap(double gap) {
  require(gap > 0.0 && gap <= 1.0, "gap must lie in (0,1], got " + format_double(gap));
}

void require_beta(double beta) {
  require(beta > 0.0 && beta < 1.0, "beta must lie in (0,1), got " + format_double(beta));
}

void require_horizon(double n, double n_min) {
  require(n >= n_min, "horizon must be at least " + format_double(n_min) + ", got " + format_double(n));
}

// x log(x / y) with 0 log 0 = 0 and +inf when y = 0 < x.
double relative_entropy_term(double x, double y) noexcept {
  if (x == 0.0) return 0.0;
  if (y == 0.0) return kInf;
  return x * std::log(x / y);
}

}  // namespace

double kl_bernoulli(double p, double q) noexcept {
  if (p == q) return 0.0;
  return relative_entropy_term(p, q) + relative_entropy_term(1.0 - p, 1.0 - q);
}

double dk_bernoulli(const Environment& env, std::size_t k) {
  require(k < env.arms(), "arm index out of range");
  if (env.degenerate()) {
    throw DegenerateEnvironment("D_k needs a suboptimal arm; all means are equal");
  }
  require(env.gap(k) > 0.0, "arm " + std::to_string(k + 1) + " is optimal; D_k needs a suboptimal arm");
  if (!env.arm(k).is_bernoulli()) {
    throw UnsupportedFamily("D_k is only available for Bernoulli arms");
  }
  if (env.best_mean() >= 1.0) {
    throw InfiniteDivergence("best mean is 1: no Bernoulli alternative beats it");
  }
  return kl_bernoulli(env.means()[k], env.best_mean());
}

double dk_twopoint_upper(double gap) {
  require(gap > 0.0 && gap < 1.0, "gap must lie in (0,1), got " + format_double(gap));
  return -std::log1p(-gap);
}

double prop1_count_bound(double rho, double gap, double n) {
  require(rho > 0.0, "rho must be positive");
  require_gap(gap);
  require_horizon(n, 1.0);
  return rho / (gap * gap) * std::log(n) + 1.0;
}

double prop2_h(double rho, double gap, double t) {
  require(rho > 0.0, "rho must be positive");
  require_gap(gap);
  require(t > 1.0, "h(t) needs t > 1");
  const double lt = std::log(t);
  const double g2 = gap * gap;
  const double shrink = 1.0 + std::sqrt(2.0 * rho * lt / ((t - 1.0) * g2));
  return rho / g2 * lt / (shrink * shrink);
}

double prop2_h_derivative(double rho, double gap, double t) {
  const double step = 1e-3 * t;
  return (prop2_h(rho, gap, t + step) - prop2_h(rho, gap, t - step)) / (2.0 * step);
}

Prop2LowerBound::Prop2LowerBound(double rho, double gap, std::uint64_t n_max) {
  require(n_max >= 2, "f(n) needs n >= 2");
  table_.reserve(n_max - 1);
  double f = -prop2_h(rho, gap, 2.0);
  double slope_prev = std::min(prop2_h_derivative(rho, gap, 2.0), 1.0);
  table_.push_back(f);
  for (std::uint64_t s = 3; s <= n_max; ++s) {
    const double slope = std::min(prop2_h_derivative(rho, gap, static_cast<double>(s)), 1.0);
    f += 0.5 * (slope_prev + slope);
    table_.push_back(f);
    slope_prev = slope;
  }
}

double Prop2LowerBound::operator()(std::uint64_t n) const {
  require(n >= 2 && n <= n_max(), "f(n) evaluated outside its table");
  return table_[n - 2];
}

double prop2_f(double rho, double gap, std::uint64_t n) { return Prop2LowerBound(rho, gap, n)(n); }

double thm3_regret_bound(const Environment& env, double rho, double beta, double n) {
  require(rho > 0.0 && rho < 0.5, "rho must lie in (0, 1/2), got " + format_double(rho));
  require_beta(beta);
  require(2.0 * rho * beta < 1.0, "requires 2 rho beta < 1");
  require_horizon(n, 1.0);
  if (env.degenerate()) throw DegenerateEnvironment("regret bound needs a suboptimal arm");

  const double ln = std::log(n);
  const double exponent = 1.0 - 2.0 * rho * beta;
  const double peel = (ln / std::log(1.0 / beta) + 1.0) * std::pow(n, exponent) / exponent;
  double total = 0.0;
  for (double gap : env.gaps()) {
    if (gap > 0.0) total += 4.0 * ln / gap + 2.0 * gap * peel;
  }
  return total;
}

double lemma1_summand(const ExplorationFn& f_k, const ExplorationFn& f_star, double beta, double t) {
  return (1.0 + std::log(t) / std::log(1.0 / beta)) *
         (std::exp(-2.0 * beta * f_k(t)) + std::exp(-2.0 * beta * f_star(t)));
}

double lemma1_count_bound(const ExplorationFn& f_k, const ExplorationFn& f_star, double gap_k,
                          double beta, std::uint64_t n) {
  require_gap(gap_k);
  require_beta(beta);
  require(n >= 1, "horizon must be at least 1");
  const double nd = static_cast<double>(n);
  const double u = std::ceil(4.0 * f_k(nd) / (gap_k * gap_k));
  double sum = 0.0;
  for (std::uint64_t t = static_cast<std::uint64_t>(u) + 1; t <= n; ++t) {
    sum += lemma1_summand(f_k, f_star, beta, static_cast<double>(t));
  }
  return u + sum;
}

double lower_curve_alpha(double dk, double alpha, double n) {
  require(alpha >= 0.0 && alpha < 1.0, "alpha must lie in [0,1)");
  require(dk > 0.0 && std::isfinite(dk), "D_k must lie in (0, inf)");
  require_horizon(n, 1.0);
  return (1.0 - alpha) * std::log(n) / dk;
}

double lower_curve_alpha(const Environment& env, std::size_t k, double alpha, double n) {
  return lower_curve_alpha(dk_bernoulli(env, k), alpha, n);
}

double ucb1_regret_bound(const Environment& env, double n) {
  require(n > 2.0, "ucb1 bound needs n > 2, got " + format_double(n));
  if (env.degenerate()) throw DegenerateEnvironment("regret bound needs a suboptimal arm");
  const double ln = std::log(n);
  double total = 0.0;
  for (double gap : env.gaps()) {
    if (gap > 0.0) total += ln / gap;
  }
  return 12.0 * total;
}

double dirac_generic_count_bound(const ExplorationFn& f_2, double gap, double n) {
  require_gap(gap);
  require_horizon(n, 1.0);
  return f_2(n) / (gap * gap) + 1.0;
}

HannanReport hannan_sufficient(const std::vector<ExplorationFn>& fs, double gamma) {
  HannanReport report;
  report.passes = true;
  if (!(gamma > 0.5)) {
    report.passes = false;
    report.reasons.push_back("gamma = " + format_double(gamma) + " does not exceed 1/2");
  }
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const ExplorationFn& f = fs[i];
    f.validate();
    const std::string name = "f_" + std::to_string(i + 1);

    if (f.c3 == 0.0) {
      report.reasons.push_back(name + ": o(n) holds (c3 = 0)");
    } else if (f.e < 1.0) {
      report.reasons.push_back(name + ": o(n) holds (e = " + format_double(f.e) + " < 1)");
    } else {
      report.passes = false;
      report.reasons.push_back(name + ": not o(n) (c3 > 0 and e = 1)");
    }

    if (f.c2 > 0.0) {
      report.reasons.push_back(name + ": log n term dominates gamma loglog n (c2 > 0)");
    } else if (f.c3 > 0.0 && f.e > 0.0) {
      report.reasons.push_back(name + ": power term dominates gamma loglog n (c3 > 0, e > 0)");
    } else if (f.c1 >= gamma) {
      report.reasons.push_back(name + ": c1 = " + format_double(f.c1) + " >= gamma");
    } else {
      report.passes = false;
      report.reasons.push_back(name + ": not eventually above gamma loglog n (c1 = " +
                               format_double(f.c1) + " < gamma = " + format_double(gamma) + ")");
    }
  }
  return report;
}

double etc_tail_probability(double gap, double sigma, std::uint64_t s) {
  require(gap > 0.0 && gap < 1.0, "gap must lie in (0,1)");
  require(sigma > 0.0, "sigma must be positive");
  require(s >= 1, "s must be at least 1");
  const double sd = static_cast<double>(s);
  const double z = gap * std::sqrt(sd) / sigma;
  const double p = std::numbers::inv_sqrtpi / std::numbers::sqrt2 / z * std::exp(-0.5 * z * z);
  return std::min(p, 1.0);
}

double etc_regret_estimate(double gap, double sigma, std::uint64_t s, double n) {
  const double p = etc_tail_probability(gap, sigma, s);
  const double sd = static_cast<double>(s);
  require(n >= 2.0 * sd, "etc estimate needs n >= 2s");
  return gap * sd + p * gap * (n - 2.0 * sd);
}

std::string_view to_string(BoundKind kind) noexcept {
  switch (kind) {
    case BoundKind::Prop1Count: return "prop1";
    case BoundKind::Prop2H: return "prop2_h";
    case BoundKind::Prop2Lower: return "prop2_f";
    case BoundKind::Thm3Regret: return "thm3";
    case BoundKind::Lemma1Count: return "lemma1";
    case BoundKind::LowerCurveAlpha: return "lower_alpha";
    case BoundKind::Ucb1Regret: return "ucb1";
    case BoundKind::DiracGenericCount: return "dirac_generic";
    case BoundKind::EtcEstimate: return "etc";
  }
  return "unknown";
}

namespace {

std::string describe(const ExplorationFn& f) {
  return "c0=" + format_double(f.c0) + ";c1=" + format_double(f.c1) + ";c2=" + format_double(f.c2) +
         ";c3=" + format_double(f.c3) + ";e=" + format_double(f.e);
}

}  // namespace

BoundCurve prop1_curve(double rho, double gap) {
  prop1_count_bound(rho, gap, 1.0);
  return {BoundKind::Prop1Count, "rho=" + format_double(rho) + ";gap=" + format_double(gap), 1,
          [rho, gap](std::uint64_t n) { return prop1_count_bound(rho, gap, static_cast<double>(n)); }};
}

BoundCurve prop2_h_curve(double rho, double gap) {
  prop2_h(rho, gap, 2.0);
  return {BoundKind::Prop2H, "rho=" + format_double(rho) + ";gap=" + format_double(gap), 2,
          [rho, gap](std::uint64_t n) { return prop2_h(rho, gap, static_cast<double>(n)); }};
}

BoundCurve prop2_lower_curve(double rho, double gap, std::uint64_t n_max) {
  auto table = std::make_shared<const Prop2LowerBound>(rho, gap, n_max);
  return {BoundKind::Prop2Lower, "rho=" + format_double(rho) + ";gap=" + format_double(gap), 2,
          [table](std::uint64_t n) { return (*table)(n); }};
}

BoundCurve thm3_curve(const Environment& env, double rho, double beta) {
  thm3_regret_bound(env, rho, beta, 1.0);
  return {BoundKind::Thm3Regret, "rho=" + format_double(rho) + ";beta=" + format_double(beta), 1,
          [env, rho, beta](std::uint64_t n) {
            return thm3_regret_bound(env, rho, beta, static_cast<double>(n));
          }};
}

BoundCurve lemma1_curve(const ExplorationFn& f_k, const ExplorationFn& f_star, double gap_k,
                        double beta) {
  lemma1_count_bound(f_k, f_star, gap_k, beta, 1);
  return {BoundKind::Lemma1Count,
          "gap=" + format_double(gap_k) + ";beta=" + format_double(beta) + ";f_k:" + describe(f_k) +
              ";f_star:" + describe(f_star),
          1, [f_k, f_star, gap_k, beta](std::uint64_t n) {
            return lemma1_count_bound(f_k, f_star, gap_k, beta, n);
          }};
}

BoundCurve lower_alpha_curve(const Environment& env, std::size_t k, double alpha) {
  const double dk = dk_bernoulli(env, k);
  lower_curve_alpha(dk, alpha, 1.0);
  return {BoundKind::LowerCurveAlpha,
          "arm=" + std::to_string(k + 1) + ";alpha=" + format_double(alpha) + ";dk=" + format_double(dk),
          1, [dk, alpha](std::uint64_t n) { return lower_curve_alpha(dk, alpha, static_cast<double>(n)); }};
}

BoundCurve ucb1_curve(const Environment& env) {
  ucb1_regret_bound(env, 3.0);
  return {BoundKind::Ucb1Regret, "", 3,
          [env](std::uint64_t n) { return ucb1_regret_bound(env, static_cast<double>(n)); }};
}

BoundCurve dirac_generic_curve(const ExplorationFn& f_2, double gap) {
  f_2.validate();
  dirac_generic_count_bound(f_2, gap, 1.0);
  return {BoundKind::DiracGenericCount, "gap=" + format_double(gap) + ";" + describe(f_2), 1,
          [f_2, gap](std::uint64_t n) {
            return dirac_generic_count_bound(f_2, gap, static_cast<double>(n));
          }};
}

BoundCurve etc_curve(double gap, double sigma, std::uint64_t s) {
  etc_tail_probability(gap, sigma, s);
  return {BoundKind::EtcEstimate,
          "gap=" + format_double(gap) + ";sigma=" + format_double(sigma) + ";s=" + std::to_string(s),
          2 * s, [gap, sigma, s](std::uint64_t n) {
            return etc_regret_estimate(gap, sigma, s, static_cast<double>(n));
          }};
}

}  // namespace banditkit
