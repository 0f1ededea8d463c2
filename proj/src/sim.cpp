#include "banditkit/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "banditkit/error.hpp"
#include "banditkit/rng.hpp"

namespace banditkit {

std::vector<std::uint64_t> checkpoint_grid(std::size_t arms, std::uint64_t n) {
  std::vector<std::uint64_t> grid;
  for (std::uint64_t decade = 1; decade <= n; decade *= 10) {
    for (std::uint64_t mantissa : {1, 2, 5}) {
      const std::uint64_t point = mantissa * decade;
      if (point >= arms && point <= n) grid.push_back(point);
    }
    if (decade > n / 10) break;
  }
  if (grid.empty() || grid.back() != n) grid.push_back(n);
  return grid;
}

std::vector<std::uint64_t> dense_grid(std::uint64_t first, std::uint64_t n) {
  std::vector<std::uint64_t> grid;
  if (first > n) return grid;
  grid.reserve(n - first + 1);
  for (std::uint64_t t = first; t <= n; ++t) grid.push_back(t);
  return grid;
}

double pseudo_regret(const Environment& env, std::span<const std::uint64_t> counts) {
  double regret = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    regret += env.gap(k) * static_cast<double>(counts[k]);
  }
  return regret;
}

namespace {

void check_checkpoints(std::span<const std::uint64_t> checkpoints, std::uint64_t n) {
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1 || checkpoints[i] > n) {
      throw ContractViolation("checkpoint " + std::to_string(checkpoints[i]) + " outside [1, n]");
    }
    if (i > 0 && checkpoints[i] <= checkpoints[i - 1]) {
      throw ContractViolation("checkpoints must be strictly increasing");
    }
  }
}

Trajectory play(const Environment& env, const PolicySpec& spec, std::uint64_t n, std::uint64_t seed,
                std::span<const std::uint64_t> checkpoints) {
  const std::size_t arms = env.arms();
  std::vector<RngStream> reward_streams;
  reward_streams.reserve(arms);
  for (std::size_t k = 0; k < arms; ++k) reward_streams.emplace_back(derive(seed, k));
  RngStream policy_stream(derive(seed, arms));

  Trajectory traj;
  traj.checkpoints.assign(checkpoints.begin(), checkpoints.end());
  traj.counts.reserve(checkpoints.size());
  traj.regret.reserve(checkpoints.size());

  PolicyState state(arms);
  std::size_t next = 0;
  for (std::uint64_t t = 1; t <= n && next < checkpoints.size(); ++t) {
    const std::size_t arm = select_arm(state, spec, n, policy_stream);
    state.update(arm, sample(env.arm(arm), reward_streams[arm]));
    if (checkpoints[next] == t) {
      traj.counts.push_back(state.counts());
      traj.regret.push_back(pseudo_regret(env, state.counts()));
      ++next;
    }
  }
  return traj;
}

}  // namespace

Trajectory run_episode(const Environment& env, const PolicySpec& spec, std::uint64_t n,
                       std::uint64_t seed, std::span<const std::uint64_t> checkpoints) {
  validate(spec, env.arms());
  if (n < env.arms()) {
    throw ContractViolation("horizon " + std::to_string(n) + " is shorter than the " +
                            std::to_string(env.arms()) + " initialization rounds");
  }
  if (checkpoints.empty()) {
    const auto grid = checkpoint_grid(env.arms(), n);
    return play(env, spec, n, seed, grid);
  }
  check_checkpoints(checkpoints, n);
  return play(env, spec, n, seed, checkpoints);
}

MonteCarloResult run_monte_carlo(const Environment& env, const PolicySpec& spec, std::uint64_t n,
                                 std::uint64_t reps, std::uint64_t base_seed,
                                 const MonteCarloOptions& options) {
  validate(spec, env.arms());
  if (reps < 1) throw ContractViolation("replications must be at least 1");
  if (n < env.arms()) {
    throw ContractViolation("horizon " + std::to_string(n) + " is shorter than the " +
                            std::to_string(env.arms()) + " initialization rounds");
  }
  const std::vector<std::uint64_t> checkpoints =
      options.checkpoints.empty() ? checkpoint_grid(env.arms(), n) : options.checkpoints;
  check_checkpoints(checkpoints, n);

  std::vector<Trajectory> runs(reps);
  std::atomic<std::uint64_t> next_rep{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::uint64_t r = next_rep++; r < reps && !failed; r = next_rep++) {
      try {
        runs[r] = play(env, spec, n, derive(base_seed, r), checkpoints);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.threads;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, reps));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  // Merge strictly in replication order.
  const std::size_t cps = checkpoints.size();
  const std::size_t arms = env.arms();
  const double count = static_cast<double>(reps);
  AggregateStats stats;
  stats.checkpoints = checkpoints;
  stats.replications = reps;
  stats.base_seed = base_seed;
  stats.mean_regret.assign(cps, 0.0);
  stats.se_regret.assign(cps, 0.0);
  stats.mean_counts.assign(cps, std::vector<double>(arms, 0.0));
  stats.se_counts.assign(cps, std::vector<double>(arms, 0.0));

  // Shifted sums around the first replication: identical runs give exactly
  // their common value and zero spread.
  const Trajectory& first = runs.front();
  auto accumulate = [&](double shift, auto value, double& mean, double& se) {
    double sum = 0.0;
    double sq = 0.0;
    for (const auto& run : runs) {
      const double d = value(run) - shift;
      sum += d;
      sq += d * d;
    }
    mean = shift + sum / count;
    if (reps > 1) se = std::sqrt(std::max(0.0, (sq - sum * sum / count) / ((count - 1.0) * count)));
  };
  for (std::size_t c = 0; c < cps; ++c) {
    accumulate(first.regret[c], [c](const Trajectory& t) { return t.regret[c]; }, stats.mean_regret[c],
               stats.se_regret[c]);
    for (std::size_t k = 0; k < arms; ++k) {
      accumulate(static_cast<double>(first.counts[c][k]),
                 [c, k](const Trajectory& t) { return static_cast<double>(t.counts[c][k]); },
                 stats.mean_counts[c][k], stats.se_counts[c][k]);
    }
  }

  MonteCarloResult result{std::move(stats), {}};
  if (options.keep_trajectories) result.trajectories = std::move(runs);
  return result;
}

GrowthFit fit_log_log(std::span<const double> n, std::span<const double> value) {
  if (n.size() != value.size()) throw ContractViolation("fit needs paired samples");
  if (n.size() < 3) throw ContractViolation("fit needs at least 3 points");
  std::vector<double> x(n.size());
  std::vector<double> y(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(n[i] > 0.0) || !(value[i] > 0.0)) {
      throw ContractViolation("cannot take log of a nonpositive value at n = " + std::to_string(n[i]));
    }
    x[i] = std::log(n[i]);
    y[i] = std::log(value[i]);
  }
  const double m = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw ContractViolation("fit needs at least two distinct horizons");

  GrowthFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = x.size();
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

GrowthFit growth_exponent(const AggregateStats& stats, std::uint64_t n_lo, std::uint64_t n_hi) {
  std::vector<double> n;
  std::vector<double> value;
  for (std::size_t c = 0; c < stats.checkpoints.size(); ++c) {
    const auto cp = stats.checkpoints[c];
    if (cp < n_lo || cp > n_hi) continue;
    n.push_back(static_cast<double>(cp));
    value.push_back(stats.mean_regret[c]);
  }
  if (n.size() < 3) {
    throw ContractViolation("growth exponent needs at least 3 checkpoints in [" +
                            std::to_string(n_lo) + ", " + std::to_string(n_hi) + "]");
  }
  return fit_log_log(n, value);
}

}  // namespace banditkit
