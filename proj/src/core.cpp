#include "banditkit/core.hpp"

#include <algorithm>
#include <string>

#include "banditkit/error.hpp"

namespace banditkit {

namespace {

void require_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw ContractViolation(std::string(what) + " must lie in [0,1], got " + std::to_string(x));
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

ArmDistribution::ArmDistribution(Dirac d) : law_(d) { require_unit(d.value, "dirac location"); }

ArmDistribution::ArmDistribution(Bernoulli b) : law_(b) { require_unit(b.p, "bernoulli parameter"); }

ArmDistribution::ArmDistribution(TwoPoint t) : law_(t) {
  require_unit(t.p, "two-point mass");
  require_unit(t.a, "two-point atom a");
  require_unit(t.b, "two-point atom b");
}

TwoPoint ArmDistribution::canonical() const noexcept {
  return std::visit(Overloaded{
                        [](const Dirac& d) { return TwoPoint{1.0, d.value, d.value}; },
                        [](const Bernoulli& b) { return TwoPoint{b.p, 1.0, 0.0}; },
                        [](const TwoPoint& t) { return t; },
                    },
                    law_);
}

bool operator==(const ArmDistribution& lhs, const ArmDistribution& rhs) noexcept {
  if (lhs.law_.index() != rhs.law_.index()) return false;
  const TwoPoint a = lhs.canonical();
  const TwoPoint b = rhs.canonical();
  return a.p == b.p && a.a == b.a && a.b == b.b;
}

double mean(const ArmDistribution& dist) noexcept {
  return std::visit(Overloaded{
                        [](const Dirac& d) { return d.value; },
                        [](const Bernoulli& b) { return b.p; },
                        [](const TwoPoint& t) { return t.p * t.a + (1.0 - t.p) * t.b; },
                    },
                    dist.variant());
}

double sample(const ArmDistribution& dist, RngStream& rng) noexcept {
  const double u = rng.uniform();
  return std::visit(Overloaded{
                        [](const Dirac& d) { return d.value; },
                        [u](const Bernoulli& b) { return u < b.p ? 1.0 : 0.0; },
                        [u](const TwoPoint& t) { return u < t.p ? t.a : t.b; },
                    },
                    dist.variant());
}

Environment::Environment(std::vector<ArmDistribution> arms) : arms_(std::move(arms)) {
  if (arms_.size() < 2) {
    throw ContractViolation("an environment needs at least 2 arms, got " +
                            std::to_string(arms_.size()));
  }
  means_.reserve(arms_.size());
  for (const auto& arm : arms_) means_.push_back(mean(arm));

  // max_element returns the first maximum: smallest index wins ties.
  best_arm_ = static_cast<std::size_t>(std::max_element(means_.begin(), means_.end()) - means_.begin());
  const double best = means_[best_arm_];

  gaps_.reserve(means_.size());
  for (double m : means_) {
    const double gap = best - m;
    gaps_.push_back(gap);
    if (gap > 0.0 && (!min_gap_ || gap < *min_gap_)) min_gap_ = gap;
  }
}

bool Environment::all_dirac() const noexcept {
  return std::all_of(arms_.begin(), arms_.end(), [](const ArmDistribution& a) { return a.is_dirac(); });
}

double Environment::min_gap() const {
  if (!min_gap_) throw DegenerateEnvironment("all arm means are equal; the minimal gap is undefined");
  return *min_gap_;
}

GapSummary analyze(const Environment& env) {
  if (env.degenerate()) {
    throw DegenerateEnvironment("all arm means are equal; the minimal gap is undefined");
  }
  return GapSummary{env.best_mean(), env.best_arm(), env.gaps()};
}

}  // namespace banditkit
