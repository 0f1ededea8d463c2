#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "banditkit/core.hpp"
#include "banditkit/policies.hpp"

namespace banditkit {

/// {1,2,5} x 10^j intersected with [arms, n], with n appended when it is not
/// already on the grid.
std::vector<std::uint64_t> checkpoint_grid(std::size_t arms, std::uint64_t n);

/// Every round from `first` to n.
std::vector<std::uint64_t> dense_grid(std::uint64_t first, std::uint64_t n);

struct Trajectory {
  std::vector<std::uint64_t> checkpoints;
  std::vector<std::vector<std::uint64_t>> counts;  // counts[c][k] = T_k(checkpoints[c])
  std::vector<double> regret;                      // sum_k gap_k * counts[c][k]

  std::size_t size() const noexcept { return checkpoints.size(); }
};

/// sum_k gap_k * counts[k], summed in arm order.
double pseudo_regret(const Environment& env, std::span<const std::uint64_t> counts);

/// Plays n rounds of `spec` on `env`. Arm k draws its rewards from
/// RngStream(derive(seed, k)); the policy's own randomness comes from
/// RngStream(derive(seed, K)). An empty `checkpoints` means checkpoint_grid.
/// Checkpoints must be increasing and lie in [1, n]. Throws ContractViolation
/// when n < K.
Trajectory run_episode(const Environment& env, const PolicySpec& spec, std::uint64_t n,
                       std::uint64_t seed, std::span<const std::uint64_t> checkpoints = {});

struct AggregateStats {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> mean_regret;
  std::vector<double> se_regret;
  std::vector<std::vector<double>> mean_counts;  // [c][k]
  std::vector<std::vector<double>> se_counts;    // [c][k]
  std::uint64_t replications = 0;
  std::uint64_t base_seed = 0;

  friend bool operator==(const AggregateStats&, const AggregateStats&) = default;
};

struct MonteCarloOptions {
  unsigned threads = 1;                      // 0 = hardware concurrency
  std::vector<std::uint64_t> checkpoints;    // empty = checkpoint_grid
  bool keep_trajectories = false;
};

struct MonteCarloResult {
  AggregateStats stats;
  std::vector<Trajectory> trajectories;  // filled when keep_trajectories
};

/// Replication r runs run_episode with seed derive(base_seed, r). Results are
/// merged in replication order, so the output does not depend on `threads`.
/// Standard errors use the unbiased sample variance and are 0 for one rep.
MonteCarloResult run_monte_carlo(const Environment& env, const PolicySpec& spec, std::uint64_t n,
                                 std::uint64_t reps, std::uint64_t base_seed,
                                 const MonteCarloOptions& options = {});

struct GrowthFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Least-squares fit of log(mean regret) against log n over the checkpoints
/// in [n_lo, n_hi]. Needs at least 3 such checkpoints, all with positive mean
/// regret; otherwise throws ContractViolation.
GrowthFit growth_exponent(const AggregateStats& stats, std::uint64_t n_lo, std::uint64_t n_hi);

/// Same fit on raw (n, value) pairs.
GrowthFit fit_log_log(std::span<const double> n, std::span<const double> value);

}  // namespace banditkit
