#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "banditkit/rng.hpp"

namespace banditkit {

struct Dirac {
  double value;
};

struct Bernoulli {
  double p;
};

/// Mass p at a, mass 1 - p at b.
struct TwoPoint {
  double p;
  double a;
  double b;
};

/// A reward law on [0,1]. Construction validates every parameter.
class ArmDistribution {
 public:
  using Variant = std::variant<Dirac, Bernoulli, TwoPoint>;

  ArmDistribution(Dirac d);
  ArmDistribution(Bernoulli b);
  ArmDistribution(TwoPoint t);

  const Variant& variant() const noexcept { return law_; }

  /// The same law written as p*delta_a + (1-p)*delta_b.
  TwoPoint canonical() const noexcept;

  bool is_bernoulli() const noexcept { return std::holds_alternative<Bernoulli>(law_); }
  bool is_dirac() const noexcept { return std::holds_alternative<Dirac>(law_); }

  friend bool operator==(const ArmDistribution& lhs, const ArmDistribution& rhs) noexcept;

 private:
  Variant law_;
};

double mean(const ArmDistribution& dist) noexcept;

/// One draw. Always consumes exactly one uniform from `rng`, whatever the law.
double sample(const ArmDistribution& dist, RngStream& rng) noexcept;

struct GapSummary {
  double best_mean;
  std::size_t best_arm;  // 0-based, smallest index attaining best_mean
  std::vector<double> gaps;
};

/// K >= 2 arms with their derived means and gaps. Degenerate environments
/// (all means equal) are valid and simulatable; only min_gap() and analyze()
/// refuse them.
class Environment {
 public:
  explicit Environment(std::vector<ArmDistribution> arms);

  std::size_t arms() const noexcept { return arms_.size(); }
  const ArmDistribution& arm(std::size_t k) const { return arms_.at(k); }
  const std::vector<ArmDistribution>& distributions() const noexcept { return arms_; }

  const std::vector<double>& means() const noexcept { return means_; }
  double best_mean() const noexcept { return means_[best_arm_]; }
  std::size_t best_arm() const noexcept { return best_arm_; }
  const std::vector<double>& gaps() const noexcept { return gaps_; }
  double gap(std::size_t k) const { return gaps_.at(k); }

  bool degenerate() const noexcept { return !min_gap_.has_value(); }
  bool all_dirac() const noexcept;

  /// Smallest positive gap. Throws DegenerateEnvironment.
  double min_gap() const;

  friend bool operator==(const Environment& lhs, const Environment& rhs) noexcept {
    return lhs.arms_ == rhs.arms_;
  }

 private:
  std::vector<ArmDistribution> arms_;
  std::vector<double> means_;
  std::vector<double> gaps_;
  std::size_t best_arm_ = 0;
  std::optional<double> min_gap_;
};

/// Best mean, best arm and gap vector; throws DegenerateEnvironment when all
/// means coincide.
GapSummary analyze(const Environment& env);

}  // namespace banditkit
