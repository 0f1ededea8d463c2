#include "banditkit/commands.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "banditkit/bounds.hpp"
#include "banditkit/format.hpp"
#include "banditkit/sim.hpp"

namespace banditkit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class IoError : public Error {
 public:
  using Error::Error;
};

fs::path output_dir(const ExperimentConfig& config, const CommandOptions& options) {
  if (options.out_dir) return *options.out_dir;
  if (config.output) return *config.output;
  return ".";
}

void write_file(const fs::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

std::uint64_t effective_seed(const ExperimentConfig& config, const CommandOptions& options) {
  return options.seed.value_or(config.seed);
}

const PolicySpec& require_policy(const ExperimentConfig& config) {
  if (!config.policy) throw ConfigError(0, "this command needs a \"policy\"");
  return *config.policy;
}

MonteCarloOptions mc_options(const CommandOptions& options) {
  MonteCarloOptions mc;
  mc.threads = options.threads;
  return mc;
}

std::string stats_csv(const AggregateStats& stats) {
  std::ostringstream out;
  write_stats_csv(out, stats);
  return out.str();
}

std::size_t suboptimal_arm(const Environment& env) { return env.best_arm() == 0 ? 1 : 0; }

struct CheckRow {
  std::uint64_t n;
  double observed;
  double bound;
  bool pass;
};

std::string verify_csv(const std::vector<CheckRow>& rows) {
  std::ostringstream out;
  out << "n,observed,bound,verdict\n";
  for (const auto& row : rows) {
    out << row.n << ',' << format_double(row.observed) << ',' << format_double(row.bound) << ','
        << (row.pass ? "PASS" : "FAIL") << '\n';
  }
  return out.str();
}

// Deterministic two-Dirac check of the suboptimal count at every round from
// 2 to n. Each reported row covers the rounds since the previous checkpoint:
// it shows the values at the checkpoint and fails if any covered round fails.
template <class Bound, class Holds>
std::vector<CheckRow> dense_check(const ExperimentConfig& config, std::uint64_t seed, Bound&& bound,
                                  Holds&& holds, std::uint64_t& violations) {
  const Environment& env = config.environment;
  const auto rounds = dense_grid(env.arms(), config.horizon);
  const Trajectory traj = run_episode(env, *config.policy, config.horizon, seed, rounds);
  const std::size_t sub = suboptimal_arm(env);
  const auto grid = checkpoint_grid(env.arms(), config.horizon);

  std::vector<CheckRow> rows;
  violations = 0;
  bool window_ok = true;
  std::size_t g = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const std::uint64_t n = traj.checkpoints[i];
    const double observed = static_cast<double>(traj.counts[i][sub]);
    const double b = bound(n);
    if (!holds(observed, b)) {
      ++violations;
      window_ok = false;
    }
    if (g < grid.size() && grid[g] == n) {
      rows.push_back({n, observed, b, window_ok});
      window_ok = true;
      ++g;
    }
  }
  return rows;
}

int report(const std::vector<CheckRow>& rows, const std::string& relation, std::ostream& log) {
  bool all = true;
  for (const auto& row : rows) {
    log << "n=" << row.n << ": " << (row.pass ? "PASS" : "FAIL") << " (observed " << format_double(row.observed)
        << ' ' << relation << " bound " << format_double(row.bound) << ")\n";
    all = all && row.pass;
  }
  log << (all ? "PASS" : "FAIL") << '\n';
  return all ? kExitOk : kExitCheckFailed;
}

int verify(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log) {
  if (!config.verify) throw ConfigError(0, "verify needs a \"verify\" section");
  require_policy(config);
  const Environment& env = config.environment;
  const std::uint64_t seed = effective_seed(config, options);
  const fs::path out = output_dir(config, options) / "verify.csv";

  std::vector<CheckRow> rows;
  std::string relation = "<=";
  std::uint64_t violations = 0;
  auto upper = [](double observed, double bound) { return observed <= bound; };
  switch (config.verify->bound) {
    case VerifiedBound::Prop1: {
      const double rho = std::get<UcbRho>(*config.policy).rho;
      const double gap = env.min_gap();
      rows = dense_check(
          config, seed, [&](std::uint64_t n) { return prop1_count_bound(rho, gap, static_cast<double>(n)); },
          upper, violations);
      break;
    }
    case VerifiedBound::Prop2: {
      const double rho = std::get<UcbRho>(*config.policy).rho;
      const Prop2LowerBound f(rho, env.min_gap(), config.horizon);
      relation = ">=";
      rows = dense_check(
          config, seed, [&](std::uint64_t n) { return f(n); },
          [](double observed, double bound) { return observed >= bound; }, violations);
      break;
    }
    case VerifiedBound::DiracGeneric: {
      const ExplorationFn f_sub = std::get<UcbGeneric>(*config.policy).fns[suboptimal_arm(env)];
      const double gap = env.min_gap();
      rows = dense_check(
          config, seed,
          [&](std::uint64_t n) { return dirac_generic_count_bound(f_sub, gap, static_cast<double>(n)); }, upper,
          violations);
      break;
    }
    case VerifiedBound::Thm3: {
      const double rho = std::get<UcbRho>(*config.policy).rho;
      const auto result = run_monte_carlo(env, *config.policy, config.horizon, config.replications, seed,
                                          mc_options(options));
      const auto& stats = result.stats;
      relation = "(mean + 2 SE) <=";
      for (std::size_t c = 0; c < stats.checkpoints.size(); ++c) {
        const auto n = stats.checkpoints[c];
        const double observed = stats.mean_regret[c] + 2.0 * stats.se_regret[c];
        const double bound = thm3_regret_bound(env, rho, config.verify->beta, static_cast<double>(n));
        rows.push_back({n, observed, bound, observed <= bound});
        if (observed > bound) ++violations;
      }
      break;
    }
  }
  write_file(out, verify_csv(rows));
  log << "verify " << to_string(config.verify->bound) << ": " << violations << " violating rounds\n";
  return report(rows, relation, log);
}

}  // namespace

int cmd_simulate(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log) {
  const PolicySpec& policy = require_policy(config);
  const std::uint64_t seed = effective_seed(config, options);
  const auto result = run_monte_carlo(config.environment, policy, config.horizon, config.replications, seed,
                                      mc_options(options));
  const fs::path dir = output_dir(config, options);

  ExperimentConfig echo = config;
  echo.seed = seed;
  json sidecar;
  sidecar["config"] = to_json(echo);
  sidecar["base_seed"] = seed;
  sidecar["replications"] = config.replications;
  sidecar["checkpoints"] = result.stats.checkpoints;

  write_file(dir / "simulate.csv", stats_csv(result.stats));
  write_file(dir / "simulate.json", sidecar.dump(2) + "\n");
  log << "simulate: " << config.replications << " replications of " << config.horizon << " rounds, seed "
      << seed << ", mean regret at n=" << config.horizon << ": "
      << format_double(result.stats.mean_regret.back()) << '\n';
  return kExitOk;
}

int cmd_verify(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log) {
  return verify(config, options, log);
}

int cmd_curves(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log) {
  std::vector<BoundCurve> curves;
  curves.reserve(config.curves.size());
  for (const auto& request : config.curves) curves.push_back(make_curve(request, config));
  const auto grid = checkpoint_grid(config.environment.arms(), config.horizon);
  std::ostringstream out;
  write_curves_csv(out, curves, grid);
  write_file(output_dir(config, options) / "curves.csv", out.str());
  log << "curves: " << curves.size() << " curves on " << grid.size() << " checkpoints\n";
  return kExitOk;
}

int cmd_exponent(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log) {
  const PolicySpec& policy = require_policy(config);
  if (!config.exponent) throw ConfigError(0, "exponent needs an \"exponent\" section");
  const std::uint64_t seed = effective_seed(config, options);
  const auto result = run_monte_carlo(config.environment, policy, config.horizon, config.replications, seed,
                                      mc_options(options));
  const fs::path dir = output_dir(config, options);
  write_file(dir / "exponent.csv", stats_csv(result.stats));

  GrowthFit fit;
  try {
    fit = growth_exponent(result.stats, config.exponent->n_lo, config.exponent->n_hi);
  } catch (const ContractViolation& e) {
    log << "exponent: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  json j;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["r2"] = fit.r2;
  j["points"] = fit.points;
  j["window"] = {config.exponent->n_lo, config.exponent->n_hi};
  j["base_seed"] = seed;
  j["replications"] = config.replications;
  write_file(dir / "exponent.json", j.dump(2) + "\n");
  log << "exponent: slope " << format_double(fit.slope) << ", r2 " << format_double(fit.r2) << " over "
      << fit.points << " checkpoints\n";
  return kExitOk;
}

int run_command(std::string_view command, const fs::path& config_path, const CommandOptions& options,
                std::ostream& log, std::ostream& err) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    err << config_path.string() << ": cannot read config\n";
    return kExitIoError;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  try {
    const ExperimentConfig config = parse_config(text);
    if (command == "simulate") return cmd_simulate(config, options, log);
    if (command == "verify") return cmd_verify(config, options, log);
    if (command == "curves") return cmd_curves(config, options, log);
    if (command == "exponent") return cmd_exponent(config, options, log);
    err << "unknown command \"" << command << "\"\n";
    return kExitInvalidConfig;
  } catch (const ConfigError& e) {
    err << config_path.string() << ":" << e.line() << ": " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const IoError& e) {
    err << e.what() << '\n';
    return kExitIoError;
  } catch (const Error& e) {
    err << config_path.string() << ": " << e.what() << '\n';
    return kExitInvalidConfig;
  }
}

}  // namespace banditkit
