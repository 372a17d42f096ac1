#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "roughstart/config.hpp"

int main(int argc, char** argv) {
  using namespace roughstart;
  CLI::App app{"roughstart: semilinear SPDE fixed-point experiments with rough random initial data"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("--config", config_path, "TOML experiment configuration");
  auto* seed_opt = app.add_option("--seed", seed, "Seed (overrides the config)");
  auto* out_opt = app.add_option("--out", out_dir, "Output directory (overrides the config)");
  auto* threads_opt = app.add_option("--threads", threads, "OpenMP threads (default: all)")->check(CLI::PositiveNumber);

  for (const char* name : {"classify", "sample", "probe", "solve", "blowup", "asymptotics"})
    app.add_subcommand(name, std::string("run the ") + name + " command")->fallthrough();

  CLI11_PARSE(app, argc, argv);

  if (threads_opt->count() > 0) {
    omp_set_num_threads(threads);
  } else if (const char* env = std::getenv("ROUGHSTART_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }

  ExperimentConfig config;
  try {
    if (!config_path.empty()) config = load_config(config_path);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  }
  config.command = command_from_string(app.get_subcommands().front()->get_name());
  if (seed_opt->count() > 0) config.seed = seed;
  if (out_opt->count() > 0) config.output_dir = out_dir;
  return run(config, std::cout, std::cerr);
}
