#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "banditkit/rng.hpp"

namespace banditkit {

/// f(t) = c0 + c1 * loglog(t) + c2 * log(t) + c3 * t^e with nonnegative
/// coefficients and e in [0,1]. loglog(t) is clamped to 0 while log(t) <= 1.
/// rho * log(t) is {.c2 = rho}.
struct ExplorationFn {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double e = 0.0;

  double operator()(double t) const noexcept;

  /// Throws ContractViolation on a negative coefficient or e outside [0,1].
  void validate() const;

  friend bool operator==(const ExplorationFn&, const ExplorationFn&) = default;
};

/// log(log(t)) when log(t) > 1, otherwise 0.
double clamped_log_log(double t) noexcept;

struct UcbRho {
  double rho;
  friend bool operator==(const UcbRho&, const UcbRho&) = default;
};

struct UcbGeneric {
  std::vector<ExplorationFn> fns;  // one per arm
  friend bool operator==(const UcbGeneric&, const UcbGeneric&) = default;
};

struct ExploreThenCommit {
  std::uint64_t s;
  friend bool operator==(const ExploreThenCommit&, const ExploreThenCommit&) = default;
};

struct UniformRandom {
  friend bool operator==(const UniformRandom&, const UniformRandom&) = default;
};

using PolicySpec = std::variant<UcbRho, UcbGeneric, ExploreThenCommit, UniformRandom>;

/// Throws ContractViolation unless rho > 0, s >= 1 and the UcbGeneric list
/// has one valid function per arm.
void validate(const PolicySpec& spec, std::size_t arms);

/// Pull counts, reward sums and running means. Running means are updated as
/// m += (x - m) / T so a constant reward stream keeps its mean exact.
class PolicyState {
 public:
  explicit PolicyState(std::size_t arms);

  std::size_t arms() const noexcept { return counts_.size(); }
  /// Number of completed rounds.
  std::uint64_t round() const noexcept { return round_; }
  std::uint64_t pulls(std::size_t arm) const { return counts_.at(arm); }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  double reward_sum(std::size_t arm) const { return sums_.at(arm); }
  double empirical_mean(std::size_t arm) const { return means_.at(arm); }
  const std::vector<double>& empirical_means() const noexcept { return means_; }

  /// Throws ContractViolation for an invalid arm or a reward outside [0,1].
  void update(std::size_t arm, double reward);

 private:
  std::vector<std::uint64_t> counts_;
  std::vector<double> sums_;
  std::vector<double> means_;
  std::uint64_t round_ = 0;
};

/// mean_hat + sqrt(f_value / s). Throws ContractViolation for s == 0.
double ucb_index(double mean_hat, std::uint64_t s, double f_value);

/// Arm (0-based) to pull at round state.round() + 1.
///
/// Rounds 1..K pull arms in order. UCB variants then return the smallest
/// index maximizing mean + sqrt(f_k(t) / T_k(t-1)). ETC pulls round-robin
/// for K*s rounds and then stays on the arm with the best empirical mean at
/// the end of exploration (smallest index on ties); after commitment that arm
/// is the only one with more than s pulls. UniformRandom draws from `rng`.
/// `horizon` is accepted for policies that need it; none of the current ones do.
std::size_t select_arm(const PolicyState& state, const PolicySpec& spec, std::uint64_t horizon,
                       RngStream& rng);

}  // namespace banditkit
