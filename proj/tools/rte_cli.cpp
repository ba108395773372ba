#include <chrono>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rte/config.hpp"
#include "rte/errors.hpp"
#include "rte/experiment.hpp"

namespace {

int execute(const rte::ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const auto outcome = rte::run_experiment(config);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& f : outcome.files) std::cout << "wrote " << f << "\n";
  for (const auto& [k, v] : outcome.summary) std::printf("%s = %.6g\n", k.c_str(), v);
  std::printf("elapsed = %.3f s\n", secs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Implicit parity solver for linear transport with diffusive scaling"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rte::kVersion));

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("--config", config_path, "Config file")->required();

  auto* condition = app.add_subcommand("condition", "Condition-number sweep of a config");
  condition->add_option("--config", config_path, "Config file")->required();

  auto* bench = app.add_subcommand("bench", "Dense LU versus PCG timing of a config");
  bench->add_option("--config", config_path, "Config file")->required();

  std::string preset_name;
  std::optional<double> epsilon, tmax;
  std::optional<std::string> out_dir;
  bool print_only = false;
  auto* preset = app.add_subcommand("preset", "Run a named example preset");
  preset->add_option("name", preset_name, "Preset name")
      ->required()
      ->check(CLI::IsMember(rte::preset_names()));
  preset->add_option("--epsilon", epsilon, "Override epsilon")->check(CLI::PositiveNumber);
  preset->add_option("--tmax", tmax, "Override the final time")->check(CLI::NonNegativeNumber);
  preset->add_option("--out", out_dir, "Output directory");
  preset->add_flag("--print", print_only, "Print the preset config instead of running it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    rte::ExperimentConfig config;
    if (*preset) {
      config = rte::preset_config(preset_name);
      if (epsilon) config.epsilon = *epsilon;
      if (tmax) config.t_max = *tmax;
      if (out_dir) config.dir = *out_dir;
      config.validate();
      if (print_only) {
        std::cout << rte::to_config_text(config);
        return 0;
      }
    } else {
      config = rte::load_config(config_path);
      if (*condition) config.mode = rte::Mode::condition;
      if (*bench) config.mode = rte::Mode::bench;
    }
    return execute(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rte::exit_code_for(e);
  }
}
