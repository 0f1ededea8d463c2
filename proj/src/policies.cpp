#include "banditkit/policies.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "banditkit/error.hpp"

namespace banditkit {

double clamped_log_log(double t) noexcept {
  const double lt = std::log(t);
  return lt > 1.0 ? std::log(lt) : 0.0;
}

double ExplorationFn::operator()(double t) const noexcept {
  // Zero terms are skipped so {.c2 = rho} evaluates to exactly rho * log(t).
  double value = c0;
  if (c1 != 0.0) value += c1 * clamped_log_log(t);
  if (c2 != 0.0) value += c2 * std::log(t);
  if (c3 != 0.0) value += c3 * std::pow(t, e);
  return value;
}

void ExplorationFn::validate() const {
  if (!(c0 >= 0.0 && c1 >= 0.0 && c2 >= 0.0 && c3 >= 0.0)) {
    throw ContractViolation("exploration function coefficients must be nonnegative");
  }
  if (!(e >= 0.0 && e <= 1.0)) {
    throw ContractViolation("exploration function exponent must lie in [0,1]");
  }
}

void validate(const PolicySpec& spec, std::size_t arms) {
  if (const auto* ucb = std::get_if<UcbRho>(&spec)) {
    if (!(ucb->rho > 0.0) || !std::isfinite(ucb->rho)) {
      throw ContractViolation("ucb_rho requires rho > 0");
    }
  } else if (const auto* generic = std::get_if<UcbGeneric>(&spec)) {
    if (generic->fns.size() != arms) {
      throw ContractViolation("ucb_generic needs one exploration function per arm (" +
                              std::to_string(arms) + "), got " +
                              std::to_string(generic->fns.size()));
    }
    for (const auto& f : generic->fns) f.validate();
  } else if (const auto* etc = std::get_if<ExploreThenCommit>(&spec)) {
    if (etc->s < 1) throw ContractViolation("etc requires s >= 1");
  }
}

PolicyState::PolicyState(std::size_t arms) : counts_(arms, 0), sums_(arms, 0.0), means_(arms, 0.0) {}

void PolicyState::update(std::size_t arm, double reward) {
  if (arm >= counts_.size()) {
    throw ContractViolation("arm " + std::to_string(arm) + " out of range");
  }
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw ContractViolation("reward must lie in [0,1], got " + std::to_string(reward));
  }
  const auto pulls = ++counts_[arm];
  sums_[arm] += reward;
  means_[arm] += (reward - means_[arm]) / static_cast<double>(pulls);
  ++round_;
}

double ucb_index(double mean_hat, std::uint64_t s, double f_value) {
  if (s == 0) throw ContractViolation("ucb index is undefined before the first pull");
  return mean_hat + std::sqrt(f_value / static_cast<double>(s));
}

namespace {

template <class ExplorationAt>
std::size_t argmax_index(const PolicyState& state, ExplorationAt&& exploration) {
  const auto& means = state.empirical_means();
  const auto& counts = state.counts();
  std::size_t best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double index = ucb_index(means[k], counts[k], exploration(k));
    if (index > best_index) {
      best_index = index;
      best = k;
    }
  }
  return best;
}

std::size_t best_empirical_arm(const PolicyState& state) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < state.arms(); ++k) {
    if (state.empirical_mean(k) > state.empirical_mean(best)) best = k;
  }
  return best;
}

}  // namespace

std::size_t select_arm(const PolicyState& state, const PolicySpec& spec, std::uint64_t /*horizon*/,
                       RngStream& rng) {
  const std::uint64_t t = state.round() + 1;
  const std::uint64_t arms = state.arms();
  if (t <= arms) return static_cast<std::size_t>(t - 1);

  const double td = static_cast<double>(t);
  if (const auto* ucb = std::get_if<UcbRho>(&spec)) {
    const double f = ucb->rho * std::log(td);
    return argmax_index(state, [f](std::size_t) { return f; });
  }
  if (const auto* generic = std::get_if<UcbGeneric>(&spec)) {
    return argmax_index(state, [&](std::size_t k) { return generic->fns[k](td); });
  }
  if (const auto* etc = std::get_if<ExploreThenCommit>(&spec)) {
    if (t <= arms * etc->s) return static_cast<std::size_t>((t - 1) % arms);
    for (std::size_t k = 0; k < state.arms(); ++k) {
      if (state.pulls(k) > etc->s) return k;
    }
    return best_empirical_arm(state);
  }
  return static_cast<std::size_t>(rng.uniform_index(arms));
}

}  // namespace banditkit
