#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fedplus/aggregators.hpp"
#include "fedplus/data_synth.hpp"
#include "fedplus/local_solver.hpp"
#include "fedplus/models.hpp"
#include "fedplus/param_space.hpp"

namespace fedplus {

/// The named algorithm family members. Baselines reset each party to the
/// central point every round and train a single global model; the +
/// variants keep per-party models and pull them toward the central point
/// through the proximal penalty.
enum class Preset {
  kFedAvg,
  kFedProx,
  kRfa,
  kCoordMedian,
  kFedAvgPlus,
  kRfaPlus,
  kCoordMedianPlus,
  kCustom,
};

std::string_view preset_name(Preset preset);
std::optional<Preset> preset_from_name(std::string_view name);
std::vector<Preset> named_presets();

/// Human-readable table of every preset and its parameter bindings.
std::string list_presets();

/// Party participation per round: independent Bernoulli(p1) draws with a
/// resample when the set comes out empty, or a uniform sample of exactly
/// `count` distinct parties.
struct ParticipationSpec {
  enum class Mode { kBernoulli, kFixedCount };

  Mode mode = Mode::kBernoulli;
  double probability = 1.0;  // p1
  std::size_t count = 0;     // m, fixed-count mode

  void validate(std::size_t parties) const;
};

std::vector<std::uint32_t> sample_parties(const ParticipationSpec& spec, std::size_t parties,
                                          Rng& rng);

/// How party models are initialized before round 1. Every party receives
/// the same draw, and the central point starts as the aggregate of those
/// identical models.
enum class InitMode { kZeros, kUniformSmall };

struct FederationConfig {
  std::size_t rounds = 1;   // K
  std::size_t parties = 1;  // N
  ParticipationSpec participation;
  LocalSolveSpec local;     // T, gamma, batch size, distance, start mode
  AlphaSchedule alpha;
  CentralitySpec centrality;
  InitMode init_mode = InitMode::kUniformSmall;
  double init_halfwidth = 0.05;
  std::size_t eval_every = 1;
  std::uint64_t seed = 0;
  Preset preset = Preset::kCustom;

  void validate() const;
};

/// Binds the preset's distance, centrality, start mode and alpha schedule.
/// Presets with an active penalty default to the constant alpha 0.001.
void apply_preset(Preset preset, FederationConfig& config);

/// One party's objective and data as seen by the engine. `accuracy` scores
/// params against a batch; diagnostic workloads without a notion of
/// accuracy report 0.
struct PartyTask {
  std::size_t dim = 0;
  ObjectiveFns objective;
  std::function<double(const ParamVector&, const Batch&)> accuracy;
  Batch train;
  Batch test;
};

PartyTask make_logistic_task(const LogisticModelShape& shape, SyntheticTask task);
PartyTask make_quadratic_task(ParamVector center);

struct AggregationChangeStats {
  double mean = 0.0;
  double stddev = 0.0;
  double max = 0.0;

  friend bool operator==(const AggregationChangeStats&, const AggregationChangeStats&) = default;
};

/// Metrics snapshot of one evaluated round. Train loss and test accuracy are
/// per party and follow the scoring protocol: persist-mode runs score each
/// party's personal model, reset-mode runs score the central model, in both
/// cases against the party's own splits.
struct RoundRecord {
  std::size_t round = 0;
  std::vector<std::uint32_t> active;
  std::vector<double> train_loss;
  std::vector<double> test_accuracy;
  ParamVector central_before;
  ParamVector central_after;
  AggregationChangeStats change;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct FederationRun {
  std::vector<RoundRecord> records;
  std::vector<ParamVector> final_models;
  ParamVector final_central;
};

/// Test/diagnostic hook invoked with each active party's round-start model.
using LocalStartObserver =
    std::function<void(std::size_t round, std::uint32_t party, const ParamVector& start)>;

/// Runs K federated rounds over the given tasks: sample the active set, run
/// Local-Solve on each active party (from its own model in persist mode,
/// from the central point in reset mode), aggregate the active parties'
/// results into the new central point, advance the alpha schedule. Inactive
/// parties are untouched and excluded from aggregation. Deterministic for a
/// fixed config and seed.
FederationRun run_federation(const FederationConfig& config, const std::vector<PartyTask>& tasks,
                             const LocalStartObserver& observer = {});

namespace stream {
inline constexpr std::uint64_t kInitStream = 3;
inline constexpr std::uint64_t kSamplingStream = 4;
inline constexpr std::uint64_t kLocalStream = 5;
}  // namespace stream

}  // namespace fedplus
