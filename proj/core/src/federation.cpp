#include "fedplus/federation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "fedplus/errors.hpp"
#include "fedplus/metrics.hpp"

namespace fedplus {

namespace {

struct PresetBinding {
  CentralitySpec::Kind centrality;
  StartMode start;
  bool penalized;  // alpha > 0 required
};

PresetBinding preset_binding(Preset preset) {
  switch (preset) {
    case Preset::kFedAvg:
      return {CentralitySpec::Kind::kMean, StartMode::kResetToCentral, false};
    case Preset::kFedProx:
      return {CentralitySpec::Kind::kMean, StartMode::kResetToCentral, true};
    case Preset::kRfa:
      return {CentralitySpec::Kind::kGeometricMedian, StartMode::kResetToCentral, false};
    case Preset::kCoordMedian:
      return {CentralitySpec::Kind::kCoordinateMedian, StartMode::kResetToCentral, false};
    case Preset::kFedAvgPlus:
      return {CentralitySpec::Kind::kMean, StartMode::kPersist, true};
    case Preset::kRfaPlus:
      return {CentralitySpec::Kind::kGeometricMedian, StartMode::kPersist, true};
    case Preset::kCoordMedianPlus:
      return {CentralitySpec::Kind::kCoordinateMedian, StartMode::kPersist, true};
    case Preset::kCustom:
      break;
  }
  throw ConfigError("custom preset has no fixed binding");
}

constexpr double kDefaultAlpha = 0.001;

}  // namespace

std::string_view preset_name(Preset preset) {
  switch (preset) {
    case Preset::kFedAvg: return "fedavg";
    case Preset::kFedProx: return "fedprox";
    case Preset::kRfa: return "rfa";
    case Preset::kCoordMedian: return "cmedian";
    case Preset::kFedAvgPlus: return "fedavg+";
    case Preset::kRfaPlus: return "rfa+";
    case Preset::kCoordMedianPlus: return "cmedian+";
    case Preset::kCustom: return "custom";
  }
  return "unknown";
}

std::vector<Preset> named_presets() {
  return {Preset::kFedAvg,     Preset::kFedProx, Preset::kRfa,
          Preset::kCoordMedian, Preset::kFedAvgPlus, Preset::kRfaPlus,
          Preset::kCoordMedianPlus};
}

std::optional<Preset> preset_from_name(std::string_view name) {
  for (Preset p : named_presets()) {
    if (preset_name(p) == name) {
      return p;
    }
  }
  if (name == "custom") {
    return Preset::kCustom;
  }
  return std::nullopt;
}

std::string list_presets() {
  auto centrality_name = [](CentralitySpec::Kind kind) {
    switch (kind) {
      case CentralitySpec::Kind::kMean: return "mean";
      case CentralitySpec::Kind::kGeometricMedian: return "geometric-median";
      case CentralitySpec::Kind::kCoordinateMedian: return "coordinate-median";
    }
    return "?";
  };
  std::ostringstream out;
  for (Preset p : named_presets()) {
    const PresetBinding b = preset_binding(p);
    out << preset_name(p) << ": centrality=" << centrality_name(b.centrality)
        << " start_mode=" << (b.start == StartMode::kPersist ? "persist" : "reset")
        << " distance=squared-l2"
        << " alpha=" << (b.penalized ? "constant>0 (default 0.001)" : "0") << '\n';
  }
  return out.str();
}

void apply_preset(Preset preset, FederationConfig& config) {
  config.preset = preset;
  if (preset == Preset::kCustom) {
    return;
  }
  const PresetBinding b = preset_binding(preset);
  config.centrality.kind = b.centrality;
  config.local.start_mode = b.start;
  config.local.distance = DistanceSpec{};  // squared-L2
  if (b.penalized) {
    if (config.alpha.kind == AlphaSchedule::Kind::kConstant && config.alpha.alpha0 == 0.0) {
      config.alpha.alpha0 = kDefaultAlpha;
    }
  } else {
    config.alpha = AlphaSchedule{};  // constant 0
  }
}

void ParticipationSpec::validate(std::size_t parties) const {
  if (mode == Mode::kBernoulli) {
    if (!(probability > 0.0) || probability > 1.0) {
      throw ConfigError("participation probability must lie in (0, 1]");
    }
  } else {
    if (count < 1 || count > parties) {
      throw ConfigError("fixed participation count must lie in [1, parties]");
    }
  }
}

std::vector<std::uint32_t> sample_parties(const ParticipationSpec& spec, std::size_t parties,
                                          Rng& rng) {
  spec.validate(parties);
  std::vector<std::uint32_t> active;
  if (spec.mode == ParticipationSpec::Mode::kBernoulli) {
    while (active.empty()) {
      for (std::size_t n = 0; n < parties; ++n) {
        if (rng.uniform() < spec.probability) {
          active.push_back(static_cast<std::uint32_t>(n));
        }
      }
    }
  } else {
    std::vector<std::uint32_t> pool(parties);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t i = 0; i < spec.count; ++i) {
      const std::size_t j = i + rng.below(parties - i);
      std::swap(pool[i], pool[j]);
    }
    active.assign(pool.begin(), pool.begin() + spec.count);
    std::sort(active.begin(), active.end());
  }
  return active;
}

void FederationConfig::validate() const {
  if (rounds == 0 || parties == 0) {
    throw ConfigError("rounds and parties must be positive");
  }
  if (eval_every == 0) {
    throw ConfigError("eval_every must be positive");
  }
  participation.validate(parties);
  local.validate();
  alpha.validate();
  if (!centrality.weights.empty() && centrality.weights.size() != parties) {
    throw ConfigError("centrality weights must cover every party");
  }
  if (preset != Preset::kCustom) {
    const PresetBinding b = preset_binding(preset);
    if (centrality.kind != b.centrality || local.start_mode != b.start) {
      throw ConfigError(std::string("config fields are inconsistent with preset ") +
                        std::string(preset_name(preset)));
    }
    const bool has_alpha = alpha.alpha0 > 0.0;
    if (b.penalized != has_alpha) {
      throw ConfigError(std::string(preset_name(preset)) +
                        (b.penalized ? " requires alpha > 0" : " requires alpha = 0"));
    }
    if (b.penalized && local.distance.kind != DistanceSpec::Kind::kSquaredL2) {
      throw ConfigError(std::string(preset_name(preset)) + " uses the squared-L2 distance");
    }
  }
}

PartyTask make_logistic_task(const LogisticModelShape& shape, SyntheticTask task) {
  PartyTask out;
  out.dim = shape.param_count();
  out.objective.loss = [shape](const ParamVector& params, const Batch& batch) {
    return logistic_loss(shape, params, batch);
  };
  out.objective.grad = [shape](const ParamVector& params, const Batch& batch) {
    return logistic_grad(shape, params, batch);
  };
  out.accuracy = [shape](const ParamVector& params, const Batch& batch) {
    return logistic_accuracy(shape, params, batch);
  };
  out.train = std::move(task.train);
  out.test = std::move(task.test);
  return out;
}

PartyTask make_quadratic_task(ParamVector center) {
  PartyTask out;
  out.dim = center.size();
  out.objective.loss = [center](const ParamVector& params, const Batch&) {
    return quadratic_loss(center, params);
  };
  out.objective.grad = [center](const ParamVector& params, const Batch&) {
    return quadratic_grad(center, params);
  };
  out.accuracy = [](const ParamVector&, const Batch&) { return 0.0; };
  return out;
}

namespace {

CentralitySpec active_subset_spec(const CentralitySpec& spec,
                                  const std::vector<std::uint32_t>& active) {
  CentralitySpec out = spec;
  if (!spec.weights.empty()) {
    out.weights.clear();
    out.weights.reserve(active.size());
    for (std::uint32_t n : active) {
      out.weights.push_back(spec.weights[n]);
    }
  }
  return out;
}

}  // namespace

FederationRun run_federation(const FederationConfig& config, const std::vector<PartyTask>& tasks,
                             const LocalStartObserver& observer) {
  config.validate();
  if (tasks.size() != config.parties) {
    throw ConfigError("expected one task per party");
  }
  const std::size_t dim = tasks.front().dim;
  for (const PartyTask& task : tasks) {
    if (task.dim != dim) {
      throw ConfigError("all parties must share one parameter dimension");
    }
  }

  // Shared initial model for every party.
  ParamVector x0(dim);
  if (config.init_mode == InitMode::kUniformSmall) {
    Rng init_rng(stream_seed(config.seed, {stream::kInitStream}));
    for (double& v : x0) {
      v = init_rng.uniform(-config.init_halfwidth, config.init_halfwidth);
    }
  }
  std::vector<ParamVector> models(config.parties, x0);
  ParamVector central = aggregate(active_subset_spec(config.centrality, {}),
                                  std::vector<ParamVector>(config.parties, x0));

  const bool persist = config.local.start_mode == StartMode::kPersist;
  FederationRun run;
  std::vector<ParamVector> active_results;
  for (std::size_t k = 1; k <= config.rounds; ++k) {
    Rng sampling_rng(stream_seed(config.seed, {stream::kSamplingStream, k}));
    const std::vector<std::uint32_t> active =
        sample_parties(config.participation, config.parties, sampling_rng);

    LocalSolveSpec local = config.local;
    local.alpha = advance_alpha(config.alpha, k);

    const ParamVector central_before = central;
    active_results.clear();
    active_results.reserve(active.size());
    for (std::uint32_t n : active) {
      const ParamVector& start = persist ? models[n] : central_before;
      if (observer) {
        observer(k, n, start);
      }
      Rng local_rng(stream_seed(config.seed, {stream::kLocalStream, k, n}));
      try {
        models[n] = local_solve(local, tasks[n].objective, tasks[n].train, start, central_before,
                                local_rng);
      } catch (const NumericalFailure& failure) {
        throw NumericalFailure("round " + std::to_string(k) + ", party " + std::to_string(n) +
                               ": " + failure.what());
      }
      active_results.push_back(models[n]);
    }

    central = aggregate(active_subset_spec(config.centrality, active), active_results);
    if (!all_finite(central)) {
      throw NumericalFailure("round " + std::to_string(k) + ": non-finite central point");
    }

    if (k % config.eval_every == 0 || k == config.rounds) {
      RoundRecord record;
      record.round = k;
      record.active = active;
      record.central_before = central_before;
      record.central_after = central;
      record.train_loss.resize(config.parties);
      record.test_accuracy.resize(config.parties);
      for (std::size_t n = 0; n < config.parties; ++n) {
        const ParamVector& scored = persist ? models[n] : central;
        record.train_loss[n] = tasks[n].objective.loss(scored, tasks[n].train);
        record.test_accuracy[n] = tasks[n].accuracy(scored, tasks[n].test);
      }
      // Aggregation replaces models only in reset mode; persist-mode parties
      // keep their local result, so the aggregation step changes nothing.
      std::vector<ParamVector> after;
      after.reserve(active.size());
      for (std::size_t i = 0; i < active.size(); ++i) {
        after.push_back(persist ? active_results[i] : central);
      }
      record.change = aggregation_change(active_results, after);
      run.records.push_back(std::move(record));
    }
  }

  run.final_models = std::move(models);
  run.final_central = std::move(central);
  return run;
}

}  // namespace fedplus
