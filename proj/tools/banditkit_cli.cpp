#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "banditkit/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stochastic bandit simulation and bound verification"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  unsigned threads = 1;
  std::uint64_t seed = 0;

  for (const char* name : {"simulate", "verify", "curves", "exponent"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads; never changes results")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "base seed, overrides the config");
  }

  CLI11_PARSE(app, argc, argv);

  const CLI::App* chosen = app.get_subcommands().front();
  banditkit::CommandOptions options;
  options.threads = threads;
  if (!out_dir.empty()) options.out_dir = std::filesystem::path(out_dir);
  if (chosen->count("--seed") > 0) options.seed = seed;

  return banditkit::run_command(chosen->get_name(), config_path, options, std::cout, std::cerr);
}
