#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fedplus/data_synth.hpp"
#include "fedplus/errors.hpp"
#include "fedplus/experiment.hpp"
#include "fedplus/federation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int run_command(const std::string& config_path, const fedplus::CliOverrides& overrides,
                std::size_t jobs) {
  const fedplus::Experiment experiment =
      fedplus::parse_experiment_file(config_path, overrides);
  fedplus::execute_experiment(experiment, jobs, &std::cout);
  return kExitOk;
}

int export_command(const std::string& config_path, const fedplus::CliOverrides& overrides,
                   std::optional<std::string> out_path) {
  const fedplus::Experiment experiment =
      fedplus::parse_experiment_file(config_path, overrides);
  if (experiment.dataset.kind != fedplus::DatasetSpec::Kind::kSynth) {
    throw fedplus::ConfigError("export-data needs a synth dataset block");
  }
  const auto tasks = fedplus::generate(experiment.dataset.synth);
  if (out_path) {
    std::ofstream out(*out_path, std::ios::binary);
    if (!out) {
      throw fedplus::ConfigError("cannot write '" + *out_path + "'");
    }
    fedplus::export_tasks(tasks, out);
    std::cout << "wrote " << *out_path << '\n';
  } else {
    fedplus::export_tasks(tasks, std::cout);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fedplus: federated learning simulation runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> rounds;
  std::optional<std::string> out_dir;
  std::size_t jobs = 1;
  std::optional<std::string> export_path;

  CLI::App* run = app.add_subcommand("run", "Execute every run in an experiment file");
  run->add_option("config", config_path, "experiment file")->required();
  run->add_option("--seed", seed, "override the dataset and run seeds");
  run->add_option("--rounds", rounds, "override the round count of every run");
  run->add_option("--out", out_dir, "output directory (else config, else $FEDPLUS_OUT)");
  run->add_option("--jobs", jobs, "worker pool size across runs")->check(CLI::PositiveNumber);

  CLI::App* list = app.add_subcommand("list-presets", "Print the presets and their bindings");

  CLI::App* exp = app.add_subcommand("export-data", "Write the synthetic dataset as columnar text");
  exp->add_option("config", config_path, "experiment file with a synth dataset block")->required();
  exp->add_option("--seed", seed, "override the dataset seed");
  exp->add_option("--out", export_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage problems are configuration errors for exit-code purposes.
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  fedplus::CliOverrides overrides;
  overrides.seed = seed;
  overrides.rounds = rounds;
  overrides.out = out_dir;

  try {
    if (list->parsed()) {
      std::cout << fedplus::list_presets();
      return kExitOk;
    }
    if (run->parsed()) {
      return run_command(config_path, overrides, jobs);
    }
    return export_command(config_path, overrides, export_path);
  } catch (const fedplus::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const fedplus::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
