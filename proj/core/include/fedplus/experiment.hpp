#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fedplus/data_synth.hpp"
#include "fedplus/federation.hpp"
#include "fedplus/metrics.hpp"

namespace fedplus {

/// Workload block of an experiment file: either the heterogeneous synthetic
/// classification data or fixed quadratic diagnostic centers.
struct DatasetSpec {
  enum class Kind { kSynth, kQuadratic };

  Kind kind = Kind::kSynth;
  SynthSpec synth;
  std::vector<ParamVector> quadratic_centers;
};

/// One fully resolved run: a named preset (or custom parameterization)
/// expanded into a complete FederationConfig.
struct RunSpec {
  std::string name;
  FederationConfig config;
};

struct Experiment {
  DatasetSpec dataset;
  std::vector<RunSpec> runs;
  std::filesystem::path out_dir;
};

/// Command-line overrides; they take precedence over file contents. The
/// seed override replaces both the dataset seed and every run seed.
struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> rounds;
  std::optional<std::string> out;
};

/// Parses the line-oriented experiment grammar (see README). Every run is
/// resolved and validated before this returns; unknown keys, bad values and
/// inconsistent preset settings throw ConfigError with the offending line.
Experiment parse_experiment_text(std::string_view text, const CliOverrides& overrides = {});
Experiment parse_experiment_file(const std::filesystem::path& path,
                                 const CliOverrides& overrides = {});

/// Party tasks for the dataset block (one generation shared by all runs).
std::vector<PartyTask> build_tasks(const DatasetSpec& dataset);

/// Canonical single-run experiment file with every value resolved. Written
/// next to the run artifacts; feeding it back through `parse_experiment_text`
/// and this renderer reproduces the same bytes.
std::string render_resolved_config(const DatasetSpec& dataset, const RunSpec& run);

/// Executes all runs (optionally with a bounded worker pool), writing
/// rounds.csv, summary.json and config.resolved under out_dir/<run name>/.
/// Returns the per-run summaries in file order. Numerical failures carry the
/// run name, round and party.
std::vector<RunSummary> execute_experiment(const Experiment& experiment, std::size_t jobs = 1,
                                           std::ostream* log = nullptr);

}  // namespace fedplus
