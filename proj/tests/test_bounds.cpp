#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "banditkit/bounds.hpp"
#include "banditkit/error.hpp"
#include "banditkit/sim.hpp"
#include "oracles.hpp"

using namespace banditkit;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kE = std::numbers::e;

std::vector<double> unit_grid(int points) {
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) grid.push_back((i + 0.5) / points);
  return grid;
}

}  // namespace

TEST_CASE("kl_bernoulli examples") {
  CHECK(kl_bernoulli(0.5, 0.5) == 0.0);
  CHECK(kl_bernoulli(0.5, 0.75) == doctest::Approx(0.143841036225890463).epsilon(1e-14));
  CHECK(kl_bernoulli(0.5, 0.75) == doctest::Approx(0.5 * std::log(4.0 / 3.0)).epsilon(1e-14));
  CHECK(kl_bernoulli(0.3, 1.0) == kInf);
  CHECK(kl_bernoulli(0.3, 0.0) == kInf);
  CHECK(kl_bernoulli(0.0, 0.4) == doctest::Approx(-std::log(0.6)));
  CHECK(kl_bernoulli(1.0, 1.0) == 0.0);
}

TEST_CASE("kl_bernoulli matches the two-atom oracle on a 100x100 grid") {
  const auto grid = unit_grid(100);
  for (double p : grid) {
    for (double q : grid) {
      REQUIRE(std::abs(kl_bernoulli(p, q) - oracle::kl_two_atoms(p, q)) <= 1e-12);
    }
  }
  for (double p : {0.0, 1.0}) {
    for (double q : grid) REQUIRE(std::abs(kl_bernoulli(p, q) - oracle::kl_two_atoms(p, q)) <= 1e-12);
  }
}

TEST_CASE("kl_bernoulli is nonnegative, zero only on the diagonal, and above Pinsker") {
  const auto grid = unit_grid(100);
  for (double p : grid) {
    for (double q : grid) {
      const double kl = kl_bernoulli(p, q);
      REQUIRE(kl >= 0.0);
      if (p == q) {
        REQUIRE(kl == 0.0);
      } else {
        REQUIRE(kl > 0.0);
      }
      REQUIRE(kl >= 2.0 * (p - q) * (p - q) - 1e-15);
    }
  }
}

TEST_CASE("dk_bernoulli") {
  const Environment env({Bernoulli{0.75}, Bernoulli{0.5}});
  CHECK(dk_bernoulli(env, 1) == doctest::Approx(0.143841036225890463).epsilon(1e-14));
  CHECK(dk_bernoulli(env, 1) == doctest::Approx(oracle::kl_two_atoms(0.5, 0.75)).epsilon(1e-14));

  CHECK_THROWS_AS(dk_bernoulli(env, 0), ContractViolation);
  CHECK_THROWS_AS(dk_bernoulli(Environment({Bernoulli{0.6}, Bernoulli{0.6}}), 1), ContractViolation);
  CHECK_THROWS_AS(dk_bernoulli(Environment({Bernoulli{1.0}, Bernoulli{0.5}}), 1), InfiniteDivergence);
  CHECK_THROWS_AS(dk_bernoulli(Environment({Bernoulli{0.75}, Dirac{0.5}}), 1), UnsupportedFamily);

  SUBCASE("vanishes monotonically as the gap closes") {
    double prev = kInf;
    for (double eps = 0.3; eps > 1e-7; eps /= 2.0) {
      const double dk = dk_bernoulli(Environment({Bernoulli{0.5 + eps}, Bernoulli{0.5}}), 1);
      CHECK(dk < prev);
      prev = dk;
    }
    CHECK(prev < 1e-12);
  }
}

TEST_CASE("dk_twopoint_upper") {
  CHECK(dk_twopoint_upper(0.75) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(dk_twopoint_upper(0.75) == doctest::Approx(1.3862943611198906).epsilon(1e-15));
  CHECK(dk_twopoint_upper(1e-9) == doctest::Approx(1e-9).epsilon(1e-8));
  CHECK(dk_twopoint_upper(1.0 - 1.0 / kE) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(dk_twopoint_upper(0.0), ContractViolation);
  CHECK_THROWS_AS(dk_twopoint_upper(1.0), ContractViolation);

  // At gap 0.75 the required rho, gap^2 / log(1/(1-gap)), exceeds 0.4.
  CHECK(0.75 * 0.75 / dk_twopoint_upper(0.75) > 0.4);
}

TEST_CASE("prop1_count_bound") {
  CHECK(prop1_count_bound(0.25, 1.0, std::exp(4.0)) == doctest::Approx(2.0).epsilon(1e-15));
  for (double rho : {0.1, 1.0, 7.0}) CHECK(prop1_count_bound(rho, 0.3, 1.0) == 1.0);
  CHECK(prop1_count_bound(0.3, 0.3, 1e5) == doctest::Approx(39.376418216567416).epsilon(1e-14));
  CHECK_THROWS_AS(prop1_count_bound(0.0, 0.3, 10), ContractViolation);
  CHECK_THROWS_AS(prop1_count_bound(0.3, 0.0, 10), ContractViolation);
  CHECK_THROWS_AS(prop1_count_bound(0.3, 0.3, 0.5), ContractViolation);
}

TEST_CASE("prop2 h and f") {
  CHECK(prop2_h(0.25, 0.5, 2.0) == doctest::Approx(0.14619920997069747).epsilon(1e-14));
  CHECK(prop2_h(0.25, 0.5, 2.0) ==
        doctest::Approx(std::log(2.0) / std::pow(1.0 + std::sqrt(2.0 * std::log(2.0)), 2)).epsilon(1e-14));
  CHECK(prop2_f(0.25, 0.5, 2) == -prop2_h(0.25, 0.5, 2.0));
  CHECK_THROWS_AS(prop2_h(0.25, 0.5, 1.0), ContractViolation);

  SUBCASE("central difference matches the closed-form derivative") {
    const double a = 0.3 / 0.09;
    const double b = 2.0 * a;
    for (double t : {3.0, 10.0, 1e3, 1e5, 1e7}) {
      const double l = std::log(t);
      const double s = std::sqrt(b * l / (t - 1.0));
      const double ds = b / (2.0 * s) * (1.0 / (t * (t - 1.0)) - l / ((t - 1.0) * (t - 1.0)));
      const double exact = a / (t * (1.0 + s) * (1.0 + s)) - 2.0 * a * l * ds / std::pow(1.0 + s, 3);
      CHECK(prop2_h_derivative(0.3, 0.3, t) == doctest::Approx(exact).epsilon(1e-5));
    }
  }

  SUBCASE("f(n)/h(n) -> 1") {
    for (double rho : {0.1, 0.3, 0.45}) {
      const Prop2LowerBound f(rho, 0.3, 10000000);
      double prev_gap = kInf;
      for (std::uint64_t n : {1000ULL, 100000ULL, 10000000ULL}) {
        const double ratio = f(n) / prop2_h(rho, 0.3, double(n));
        CHECK(std::abs(1.0 - ratio) < prev_gap);
        prev_gap = std::abs(1.0 - ratio);
      }
      const double ratio = f(10000000) / prop2_h(rho, 0.3, 1e7);
      CHECK(ratio >= 0.95);
      CHECK(ratio <= 1.05);
    }
  }

  SUBCASE("table and single evaluation agree") {
    const Prop2LowerBound table(0.3, 0.3, 500);
    for (std::uint64_t n : {2, 3, 17, 500}) CHECK(table(n) == prop2_f(0.3, 0.3, n));
    CHECK_THROWS_AS(table(501), ContractViolation);
  }
}

TEST_CASE("thm3_regret_bound") {
  const Environment one_gap({Dirac{1.0}, Dirac{0.0}});
  const double expected = 4.0 + 2.0 * (1.0 / std::log(2.0) + 1.0) * std::exp(0.75) / 0.75;
  CHECK(thm3_regret_bound(one_gap, 0.25, 0.5, kE) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(thm3_regret_bound(one_gap, 0.25, 0.5, kE) == doctest::Approx(17.789827845711023).epsilon(1e-14));
  CHECK(thm3_regret_bound(one_gap, 0.25, 0.5, 1.0) == doctest::Approx(2.0 / 0.75).epsilon(1e-15));

  CHECK_THROWS_AS(thm3_regret_bound(Environment({Dirac{0.5}, Dirac{0.5}}), 0.25, 0.5, 10), DegenerateEnvironment);
  CHECK_THROWS_AS(thm3_regret_bound(one_gap, 0.5, 0.5, 10), ContractViolation);
  CHECK_THROWS_AS(thm3_regret_bound(one_gap, 0.25, 1.0, 10), ContractViolation);

  SUBCASE("sums over suboptimal arms only") {
    const Environment env({Bernoulli{0.5}, Dirac{0.4}, Dirac{0.5}, Dirac{0.2}});
    const double a = thm3_regret_bound(Environment({Bernoulli{0.5}, Dirac{0.4}}), 0.25, 0.9, 1000);
    const double b = thm3_regret_bound(Environment({Bernoulli{0.5}, Dirac{0.2}}), 0.25, 0.9, 1000);
    CHECK(thm3_regret_bound(env, 0.25, 0.9, 1000) == doctest::Approx(a + b).epsilon(1e-14));
  }

  SUBCASE("nondecreasing in n") {
    const Environment env({Bernoulli{0.5}, Dirac{0.4}, TwoPoint{0.5, 0.0, 0.6}});
    for (double rho : {0.05, 0.25, 0.49}) {
      for (double beta : {0.1, 0.5, 0.9}) {
        double prev = -kInf;
        for (double n = 1.0; n < 1e7; n *= 1.05) {
          const double v = thm3_regret_bound(env, rho, beta, n);
          REQUIRE(v >= prev);
          prev = v;
        }
      }
    }
  }
}

TEST_CASE("lemma1_count_bound") {
  const ExplorationFn log_t{.c2 = 1.0};
  CHECK(lemma1_count_bound(log_t, log_t, 0.1, 0.9, 10) == std::ceil(400.0 * std::log(10.0)));

  SUBCASE("rho log t reproduces the peeling summand term by term") {
    for (double rho : {0.1, 0.25, 0.45}) {
      for (double beta : {0.3, 0.9}) {
        const ExplorationFn f{.c2 = rho};
        for (int i = 0; i < 100; ++i) {
          const double t = 2.0 + 97.0 * i * i;
          const double ours = lemma1_summand(f, f, beta, t);
          const double peel = 2.0 * oracle::peeling_summand(rho, beta, t);
          REQUIRE(std::abs(ours - peel) <= 1e-12 * std::max(1.0, std::abs(peel)));
        }
      }
    }
  }

  SUBCASE("literal sum") {
    const ExplorationFn f{.c2 = 0.25};
    const ExplorationFn g{.c1 = 1.0};
    const std::uint64_t n = 400;
    const double u = std::ceil(4.0 * f(double(n)) / 0.25);
    double sum = u;
    for (std::uint64_t t = std::uint64_t(u) + 1; t <= n; ++t) {
      const double td = double(t);
      sum += (1.0 + std::log(td) / std::log(1.0 / 0.8)) * (std::exp(-1.6 * f(td)) + std::exp(-1.6 * g(td)));
    }
    CHECK(lemma1_count_bound(f, g, 0.5, 0.8, n) == doctest::Approx(sum).epsilon(1e-13));
  }

  SUBCASE("nondecreasing when dropped summands stay below one") {
    struct Case {
      double rho, gap, beta;
    };
    for (Case c : {Case{0.5, 0.3, 0.9}, Case{2.0, 0.5, 0.5}}) {
      const ExplorationFn f{.c2 = c.rho};
      double prev = -kInf;
      for (std::uint64_t n = 1; n < 3000; ++n) {
        const double v = lemma1_count_bound(f, f, c.gap, c.beta, n);
        REQUIRE(v >= prev);
        prev = v;
      }
    }
  }

  SUBCASE("the ceiling in u can make the literal bound drop") {
    const ExplorationFn f{.c2 = 0.25};
    CHECK(lemma1_count_bound(f, f, 0.5, 0.9, 26) < lemma1_count_bound(f, f, 0.5, 0.9, 25));
  }
}

TEST_CASE("lower_curve_alpha") {
  const Environment env({Bernoulli{0.75}, Bernoulli{0.5}});
  CHECK(lower_curve_alpha(env, 1, 0.0, kE) == doctest::Approx(6.952118993564414).epsilon(1e-13));

  const double dk = dk_bernoulli(env, 1);
  for (double n : {3.0, 10.0, 1e3, 1e5}) {
    // alpha = 0 is the plain log n / D_k curve.
    CHECK(lower_curve_alpha(env, 1, 0.0, n) == std::log(n) / dk);
    for (double alpha : {0.0, 0.3, 0.9}) {
      const double step = lower_curve_alpha(dk, alpha, 2 * n) - lower_curve_alpha(dk, alpha, n);
      CHECK(step == doctest::Approx((1.0 - alpha) * std::log(2.0) / dk).epsilon(1e-12));
    }
  }
  CHECK(lower_curve_alpha(dk, 1.0 - 1e-12, 1e5) < 1e-9);
  CHECK_THROWS_AS(lower_curve_alpha(dk, 1.0, 10), ContractViolation);
  CHECK_THROWS_AS(lower_curve_alpha(0.0, 0.5, 10), ContractViolation);
  CHECK_THROWS_AS(lower_curve_alpha(kInf, 0.5, 10), ContractViolation);
}

TEST_CASE("ucb1_regret_bound") {
  CHECK(ucb1_regret_bound(Environment({Dirac{1.0}, Dirac{0.5}}), kE) == doctest::Approx(24.0).epsilon(1e-15));
  CHECK_THROWS_AS(ucb1_regret_bound(Environment({Dirac{1.0}, Dirac{0.5}}), 1.0), ContractViolation);
  CHECK_THROWS_AS(ucb1_regret_bound(Environment({Dirac{0.5}, Dirac{0.5}}), 10.0), DegenerateEnvironment);
  const Environment three({Dirac{0.9}, Dirac{0.5}, Dirac{0.8}});
  CHECK(ucb1_regret_bound(three, 100.0) == doctest::Approx(12.0 * std::log(100.0) * (1 / 0.4 + 1 / 0.1)));
}

TEST_CASE("dirac_generic_count_bound") {
  const ExplorationFn loglog{.c1 = 1.0};
  CHECK(dirac_generic_count_bound(loglog, 0.3, 1e5) == doctest::Approx(28.149670640911733).epsilon(1e-13));
  CHECK(dirac_generic_count_bound(loglog, 0.3, 2.0) == 1.0);
  CHECK(dirac_generic_count_bound(loglog, 0.3, 1.0) == 1.0);
}

TEST_CASE("hannan_sufficient") {
  const ExplorationFn loglog{.c1 = 1.0};
  const ExplorationFn linear{.c3 = 1.0, .e = 1.0};
  const ExplorationFn weak{.c1 = 0.4};

  const auto ok = hannan_sufficient({loglog, loglog}, 1.0);
  CHECK(ok.passes);
  CHECK_FALSE(ok.reasons.empty());

  const auto linear_report = hannan_sufficient({linear, loglog}, 1.0);
  CHECK_FALSE(linear_report.passes);
  bool cites_o_n = false;
  for (const auto& r : linear_report.reasons) cites_o_n = cites_o_n || r.find("not o(n)") != std::string::npos;
  CHECK(cites_o_n);

  CHECK_FALSE(hannan_sufficient({weak, weak}, 0.4).passes);  // gamma not above 1/2
  CHECK_FALSE(hannan_sufficient({weak, weak}, 0.6).passes);  // c1 below gamma
  CHECK_FALSE(hannan_sufficient({weak, weak}, 1.0).passes);

  CHECK(hannan_sufficient({ExplorationFn{.c2 = 0.01}, ExplorationFn{.c3 = 2.0, .e = 0.5}}, 0.75).passes);
  CHECK_FALSE(hannan_sufficient({ExplorationFn{.c0 = 5.0}, loglog}, 0.75).passes);
  CHECK_FALSE(hannan_sufficient({ExplorationFn{.c3 = 3.0, .e = 0.0}, loglog}, 0.75).passes);
}

TEST_CASE("etc_regret_estimate") {
  CHECK(etc_tail_probability(0.2, 0.5, 200) == doctest::Approx(7.936396669916596e-9).epsilon(1e-12));
  CHECK(etc_regret_estimate(0.2, 0.5, 200, 1e4) == doctest::Approx(40.00001523788161).epsilon(1e-14));
  CHECK(etc_regret_estimate(0.2, 0.5, 20000, 1e5) == doctest::Approx(0.2 * 20000).epsilon(1e-14));
  CHECK(etc_tail_probability(0.01, 5.0, 1) == 1.0);
  CHECK_THROWS_AS(etc_tail_probability(0.2, 0.5, 0), ContractViolation);
  CHECK_THROWS_AS(etc_regret_estimate(0.2, 0.5, 200, 300), ContractViolation);
}

TEST_CASE("curves evaluate their functions") {
  const Environment env({Bernoulli{0.75}, Bernoulli{0.5}});
  const auto ucb1 = ucb1_curve(env);
  CHECK(ucb1.n_min == 3);
  CHECK(to_string(ucb1.kind) == "ucb1");
  CHECK(ucb1(1000) == ucb1_regret_bound(env, 1000.0));
  double prev = 0.0;
  for (auto n : checkpoint_grid(2, 100000)) {
    if (n < 3) continue;
    CHECK(ucb1(n) > prev);
    prev = ucb1(n);
  }

  const auto lower = lower_alpha_curve(env, 1, 0.0);
  CHECK(lower(100) == lower_curve_alpha(env, 1, 0.0, 100.0));
  CHECK(lower.params.find(',') == std::string::npos);

  const auto f = prop2_lower_curve(0.3, 0.3, 1000);
  CHECK(f(1000) == prop2_f(0.3, 0.3, 1000));
  CHECK_THROWS_AS(thm3_curve(env, 0.6, 0.5), ContractViolation);
}
