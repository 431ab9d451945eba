#include "fedplus/experiment.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "fedplus/errors.hpp"

namespace fedplus {

namespace {

// ---------------------------------------------------------------------------
// Tokenized file representation
// ---------------------------------------------------------------------------

struct Entry {
  std::size_t line = 0;
  std::string key;
  std::string value;
};

struct Section {
  std::size_t line = 0;
  std::string kind;  // "dataset", "shared", "run"
  std::string name;  // run name
  std::vector<Entry> entries;
};

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  throw ConfigError("line " + std::to_string(line) + ": " + message);
}

std::string trim(std::string_view s) {
  const char* ws = " \t\r";
  const auto begin = s.find_first_not_of(ws);
  if (begin == std::string_view::npos) {
    return {};
  }
  const auto end = s.find_last_not_of(ws);
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<Section> tokenize(std::string_view text) {
  std::vector<Section> sections;
  std::size_t line_no = 0;
  std::istringstream stream{std::string(text)};
  std::string raw;
  while (std::getline(stream, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) {
      raw.erase(hash);
    }
    const std::string line = trim(raw);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        fail(line_no, "unterminated section header");
      }
      const std::string header = trim(line.substr(1, line.size() - 2));
      Section section;
      section.line = line_no;
      if (header == "dataset" || header == "shared") {
        section.kind = header;
      } else if (header.rfind("run", 0) == 0) {
        section.kind = "run";
        section.name = trim(header.substr(3));
        if (section.name.empty()) {
          fail(line_no, "run section needs a name: [run NAME]");
        }
        const std::string allowed =
            "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_+.-";
        if (section.name.find_first_not_of(allowed) != std::string::npos) {
          fail(line_no, "run name '" + section.name + "' has characters outside [A-Za-z0-9_+.-]");
        }
      } else {
        fail(line_no, "unknown section [" + header + "]");
      }
      sections.push_back(std::move(section));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(line_no, "expected 'key = value'");
    }
    if (sections.empty()) {
      fail(line_no, "key outside any section");
    }
    Entry entry;
    entry.line = line_no;
    entry.key = trim(line.substr(0, eq));
    entry.value = trim(line.substr(eq + 1));
    if (entry.key.empty() || entry.value.empty()) {
      fail(line_no, "expected 'key = value'");
    }
    sections.back().entries.push_back(std::move(entry));
  }
  return sections;
}

// ---------------------------------------------------------------------------
// Typed value parsing
// ---------------------------------------------------------------------------

double to_double(const Entry& e) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc{} || ptr != e.value.data() + e.value.size()) {
    fail(e.line, "key '" + e.key + "': bad number '" + e.value + "'");
  }
  return v;
}

std::uint64_t to_u64(const Entry& e) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc{} || ptr != e.value.data() + e.value.size()) {
    fail(e.line, "key '" + e.key + "': bad integer '" + e.value + "'");
  }
  return v;
}

std::size_t to_size(const Entry& e) { return static_cast<std::size_t>(to_u64(e)); }

std::vector<ParamVector> parse_centers(const Entry& e) {
  std::vector<ParamVector> centers;
  std::istringstream groups(e.value);
  std::string group;
  while (std::getline(groups, group, ';')) {
    std::vector<double> coords;
    std::istringstream parts(group);
    std::string part;
    while (std::getline(parts, part, ',')) {
      const std::string token = trim(part);
      if (token.empty()) {
        continue;
      }
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc{} || ptr != token.data() + token.size()) {
        fail(e.line, "centers: bad number '" + token + "'");
      }
      coords.push_back(v);
    }
    if (coords.empty()) {
      fail(e.line, "centers: empty vector");
    }
    centers.emplace_back(std::move(coords));
  }
  if (centers.empty()) {
    fail(e.line, "centers: no vectors given");
  }
  for (const ParamVector& c : centers) {
    if (c.size() != centers.front().size()) {
      fail(e.line, "centers: vectors have mixed dimensions");
    }
  }
  return centers;
}

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// Section interpretation
// ---------------------------------------------------------------------------

DatasetSpec parse_dataset(const Section& section) {
  DatasetSpec dataset;
  bool saw_kind = false;
  for (const Entry& e : section.entries) {
    if (e.key == "kind") {
      saw_kind = true;
      if (e.value == "synth") {
        dataset.kind = DatasetSpec::Kind::kSynth;
      } else if (e.value == "quadratic") {
        dataset.kind = DatasetSpec::Kind::kQuadratic;
      } else {
        fail(e.line, "dataset kind must be 'synth' or 'quadratic'");
      }
    }
  }
  if (!saw_kind) {
    fail(section.line, "[dataset] needs a 'kind' key");
  }
  for (const Entry& e : section.entries) {
    if (e.key == "kind") {
      continue;
    }
    if (dataset.kind == DatasetSpec::Kind::kSynth) {
      if (e.key == "zeta") {
        dataset.synth.zeta = to_double(e);
      } else if (e.key == "beta") {
        dataset.synth.beta = to_double(e);
      } else if (e.key == "parties") {
        dataset.synth.parties = to_size(e);
      } else if (e.key == "features") {
        dataset.synth.feature_dim = to_size(e);
      } else if (e.key == "classes") {
        dataset.synth.classes = to_size(e);
      } else if (e.key == "seed") {
        dataset.synth.seed = to_u64(e);
      } else if (e.key == "count_exponent") {
        dataset.synth.count_law.exponent = to_double(e);
      } else if (e.key == "count_min") {
        dataset.synth.count_law.min_count = to_size(e);
      } else if (e.key == "count_max") {
        dataset.synth.count_law.max_count = to_size(e);
      } else if (e.key == "train_fraction") {
        dataset.synth.train_fraction = to_double(e);
      } else {
        fail(e.line, "unknown key '" + e.key + "' in [dataset] (synth)");
      }
    } else {
      if (e.key == "centers") {
        dataset.quadratic_centers = parse_centers(e);
      } else {
        fail(e.line, "unknown key '" + e.key + "' in [dataset] (quadratic)");
      }
    }
  }
  if (dataset.kind == DatasetSpec::Kind::kSynth) {
    dataset.synth.validate();
  } else if (dataset.quadratic_centers.empty()) {
    fail(section.line, "quadratic dataset needs a 'centers' key");
  }
  return dataset;
}

std::size_t dataset_parties(const DatasetSpec& dataset) {
  return dataset.kind == DatasetSpec::Kind::kSynth ? dataset.synth.parties
                                                   : dataset.quadratic_centers.size();
}

FederationConfig default_config(const DatasetSpec& dataset) {
  FederationConfig config;
  config.parties = dataset_parties(dataset);
  config.rounds = 200;
  config.local.steps = 20;
  config.local.learning_rate = 0.01;
  config.eval_every = 1;
  if (dataset.kind == DatasetSpec::Kind::kSynth) {
    config.local.batch_size = 32;
    config.init_mode = InitMode::kUniformSmall;
    config.participation.mode = ParticipationSpec::Mode::kFixedCount;
    config.participation.count = std::min<std::size_t>(10, config.parties);
  } else {
    config.local.batch_size = kFullBatch;
    config.init_mode = InitMode::kZeros;
    config.participation.mode = ParticipationSpec::Mode::kBernoulli;
    config.participation.probability = 1.0;
  }
  return config;
}

// Keys shared sections may set. Run sections accept these plus the
// algorithm-defining keys.
bool apply_common_key(FederationConfig& config, const Entry& e) {
  if (e.key == "rounds") {
    config.rounds = to_size(e);
  } else if (e.key == "local_steps") {
    config.local.steps = to_size(e);
  } else if (e.key == "learning_rate") {
    config.local.learning_rate = to_double(e);
  } else if (e.key == "batch_size") {
    config.local.batch_size = to_size(e);
  } else if (e.key == "participants") {
    config.participation.mode = ParticipationSpec::Mode::kFixedCount;
    config.participation.count = to_size(e);
  } else if (e.key == "participation_prob") {
    config.participation.mode = ParticipationSpec::Mode::kBernoulli;
    config.participation.probability = to_double(e);
  } else if (e.key == "eval_every") {
    config.eval_every = to_size(e);
  } else if (e.key == "seed") {
    config.seed = to_u64(e);
  } else {
    return false;
  }
  return true;
}

void apply_run_key(FederationConfig& config, const Entry& e) {
  if (apply_common_key(config, e)) {
    return;
  }
  if (e.key == "alpha") {
    config.alpha.alpha0 = to_double(e);
  } else if (e.key == "alpha_decay") {
    config.alpha.kind = AlphaSchedule::Kind::kGeometricDecay;
    config.alpha.decay = to_double(e);
  } else if (e.key == "centrality") {
    if (e.value == "mean") {
      config.centrality.kind = CentralitySpec::Kind::kMean;
    } else if (e.value == "geometric-median") {
      config.centrality.kind = CentralitySpec::Kind::kGeometricMedian;
    } else if (e.value == "coordinate-median") {
      config.centrality.kind = CentralitySpec::Kind::kCoordinateMedian;
    } else {
      fail(e.line, "centrality must be mean, geometric-median or coordinate-median");
    }
  } else if (e.key == "start_mode") {
    if (e.value == "persist") {
      config.local.start_mode = StartMode::kPersist;
    } else if (e.value == "reset" || e.value == "reset-to-central") {
      config.local.start_mode = StartMode::kResetToCentral;
    } else {
      fail(e.line, "start_mode must be 'persist' or 'reset'");
    }
  } else if (e.key == "distance") {
    if (e.value != "squared-l2") {
      fail(e.line, "only the squared-l2 distance is configurable here");
    }
    config.local.distance = DistanceSpec{};
  } else if (e.key == "weiszfeld_iters") {
    config.centrality.weiszfeld_iters = to_size(e);
  } else if (e.key == "weiszfeld_tol") {
    config.centrality.weiszfeld_tol = to_double(e);
  } else if (e.key == "weiszfeld_smoothing") {
    config.centrality.weiszfeld_smoothing = to_double(e);
  } else if (e.key == "init") {
    if (e.value == "zeros") {
      config.init_mode = InitMode::kZeros;
    } else if (e.value == "uniform-small") {
      config.init_mode = InitMode::kUniformSmall;
    } else {
      fail(e.line, "init must be 'zeros' or 'uniform-small'");
    }
  } else {
    fail(e.line, "unknown key '" + e.key + "' in run section");
  }
}

std::string valid_preset_list() {
  std::string out;
  for (Preset p : named_presets()) {
    out += std::string(preset_name(p)) + ", ";
  }
  out += "custom";
  return out;
}

RunSpec resolve_run(const Section& section, const DatasetSpec& dataset,
                    const std::vector<Entry>& shared, const CliOverrides& overrides) {
  RunSpec run;
  run.name = section.name;
  run.config = default_config(dataset);

  const Entry* preset_entry = nullptr;
  for (const Entry& e : section.entries) {
    if (e.key == "preset") {
      preset_entry = &e;
    }
  }
  if (preset_entry == nullptr) {
    fail(section.line, "[run " + section.name + "] needs a 'preset' key");
  }
  const auto preset = preset_from_name(preset_entry->value);
  if (!preset) {
    fail(preset_entry->line,
         "unknown preset '" + preset_entry->value + "' (valid: " + valid_preset_list() + ")");
  }
  apply_preset(*preset, run.config);

  for (const Entry& e : shared) {
    if (e.key == "out") {
      continue;
    }
    if (!apply_common_key(run.config, e)) {
      fail(e.line, "unknown key '" + e.key + "' in [shared]");
    }
  }
  for (const Entry& e : section.entries) {
    if (e.key == "preset") {
      continue;
    }
    apply_run_key(run.config, e);
  }

  if (overrides.seed) {
    run.config.seed = *overrides.seed;
  }
  if (overrides.rounds) {
    run.config.rounds = *overrides.rounds;
  }
  try {
    run.config.validate();
  } catch (const ConfigError& err) {
    fail(section.line, "[run " + run.name + "]: " + err.what());
  }
  return run;
}

}  // namespace

Experiment parse_experiment_text(std::string_view text, const CliOverrides& overrides) {
  const std::vector<Section> sections = tokenize(text);

  const Section* dataset_section = nullptr;
  const Section* shared_section = nullptr;
  std::vector<const Section*> run_sections;
  for (const Section& section : sections) {
    if (section.kind == "dataset") {
      if (dataset_section != nullptr) {
        fail(section.line, "duplicate [dataset] section");
      }
      dataset_section = &section;
    } else if (section.kind == "shared") {
      if (shared_section != nullptr) {
        fail(section.line, "duplicate [shared] section");
      }
      shared_section = &section;
    } else {
      run_sections.push_back(&section);
    }
  }
  if (dataset_section == nullptr) {
    throw ConfigError("experiment file needs a [dataset] section");
  }

  Experiment experiment;
  experiment.dataset = parse_dataset(*dataset_section);
  if (overrides.seed && experiment.dataset.kind == DatasetSpec::Kind::kSynth) {
    experiment.dataset.synth.seed = *overrides.seed;
  }

  std::string out_dir;
  std::vector<Entry> shared_entries;
  if (shared_section != nullptr) {
    for (const Entry& e : shared_section->entries) {
      if (e.key == "out") {
        out_dir = e.value;
      } else {
        shared_entries.push_back(e);
      }
    }
  }

  std::set<std::string> names;
  for (const Section* section : run_sections) {
    if (!names.insert(section->name).second) {
      fail(section->line, "duplicate run name '" + section->name + "'");
    }
    experiment.runs.push_back(resolve_run(*section, experiment.dataset, shared_entries, overrides));
  }

  if (overrides.out) {
    experiment.out_dir = *overrides.out;
  } else if (!out_dir.empty()) {
    experiment.out_dir = out_dir;
  } else if (const char* env = std::getenv("FEDPLUS_OUT"); env != nullptr && *env != '\0') {
    experiment.out_dir = env;
  } else {
    experiment.out_dir = "results";
  }
  return experiment;
}

Experiment parse_experiment_file(const std::filesystem::path& path, const CliOverrides& overrides) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read experiment file '" + path.string() + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_text(text.str(), overrides);
}

std::vector<PartyTask> build_tasks(const DatasetSpec& dataset) {
  std::vector<PartyTask> tasks;
  if (dataset.kind == DatasetSpec::Kind::kSynth) {
    const LogisticModelShape shape = dataset.synth.model_shape();
    for (SyntheticTask& task : generate(dataset.synth)) {
      tasks.push_back(make_logistic_task(shape, std::move(task)));
    }
  } else {
    for (const ParamVector& center : dataset.quadratic_centers) {
      tasks.push_back(make_quadratic_task(center));
    }
  }
  return tasks;
}

std::string render_resolved_config(const DatasetSpec& dataset, const RunSpec& run) {
  std::ostringstream out;
  out << "# fedplus resolved run configuration\n";
  out << "[dataset]\n";
  if (dataset.kind == DatasetSpec::Kind::kSynth) {
    const SynthSpec& s = dataset.synth;
    out << "kind = synth\n";
    out << "zeta = " << shortest(s.zeta) << '\n';
    out << "beta = " << shortest(s.beta) << '\n';
    out << "parties = " << s.parties << '\n';
    out << "features = " << s.feature_dim << '\n';
    out << "classes = " << s.classes << '\n';
    out << "count_exponent = " << shortest(s.count_law.exponent) << '\n';
    out << "count_min = " << s.count_law.min_count << '\n';
    out << "count_max = " << s.count_law.max_count << '\n';
    out << "train_fraction = " << shortest(s.train_fraction) << '\n';
    out << "seed = " << s.seed << '\n';
  } else {
    out << "kind = quadratic\n";
    out << "centers = ";
    for (std::size_t n = 0; n < dataset.quadratic_centers.size(); ++n) {
      if (n > 0) {
        out << " ; ";
      }
      const ParamVector& c = dataset.quadratic_centers[n];
      for (std::size_t d = 0; d < c.size(); ++d) {
        if (d > 0) {
          out << ',';
        }
        out << shortest(c[d]);
      }
    }
    out << '\n';
  }

  const FederationConfig& c = run.config;
  out << "\n[run " << run.name << "]\n";
  out << "preset = " << preset_name(c.preset) << '\n';
  out << "rounds = " << c.rounds << '\n';
  out << "local_steps = " << c.local.steps << '\n';
  out << "learning_rate = " << shortest(c.local.learning_rate) << '\n';
  out << "batch_size = " << c.local.batch_size << '\n';
  if (c.participation.mode == ParticipationSpec::Mode::kFixedCount) {
    out << "participants = " << c.participation.count << '\n';
  } else {
    out << "participation_prob = " << shortest(c.participation.probability) << '\n';
  }
  out << "eval_every = " << c.eval_every << '\n';
  out << "seed = " << c.seed << '\n';
  out << "init = " << (c.init_mode == InitMode::kZeros ? "zeros" : "uniform-small") << '\n';
  out << "start_mode = " << (c.local.start_mode == StartMode::kPersist ? "persist" : "reset")
      << '\n';
  switch (c.centrality.kind) {
    case CentralitySpec::Kind::kMean:
      out << "centrality = mean\n";
      break;
    case CentralitySpec::Kind::kGeometricMedian:
      out << "centrality = geometric-median\n";
      out << "weiszfeld_iters = " << c.centrality.weiszfeld_iters << '\n';
      out << "weiszfeld_tol = " << shortest(c.centrality.weiszfeld_tol) << '\n';
      out << "weiszfeld_smoothing = " << shortest(c.centrality.weiszfeld_smoothing) << '\n';
      break;
    case CentralitySpec::Kind::kCoordinateMedian:
      out << "centrality = coordinate-median\n";
      break;
  }
  out << "distance = squared-l2\n";
  out << "alpha = " << shortest(c.alpha.alpha0) << '\n';
  if (c.alpha.kind == AlphaSchedule::Kind::kGeometricDecay) {
    out << "alpha_decay = " << shortest(c.alpha.decay) << '\n';
  }
  return out.str();
}

namespace {

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot write '" + path.string() + "'");
  }
  out << contents;
}

RunSummary execute_run(const DatasetSpec& dataset, const std::vector<PartyTask>& tasks,
                       const RunSpec& run, const std::filesystem::path& run_dir,
                       const std::string& resolved, const std::string& fingerprint) {
  const auto started = std::chrono::steady_clock::now();
  FederationRun result;
  try {
    result = run_federation(run.config, tasks);
  } catch (const NumericalFailure& failure) {
    throw NumericalFailure("run '" + run.name + "', " + failure.what());
  }
  RunSummary summary =
      summarize(result.records, preset_name(run.config.preset), fingerprint);
  summary.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  std::ostringstream csv;
  write_round_csv(csv, preset_name(run.config.preset), result.records);
  write_file(run_dir / "rounds.csv", csv.str());

  std::ostringstream json;
  write_summary_json(json, summary, resolved);
  write_file(run_dir / "summary.json", json.str());
  return summary;
}

}  // namespace

std::vector<RunSummary> execute_experiment(const Experiment& experiment, std::size_t jobs,
                                           std::ostream* log) {
  if (experiment.runs.empty()) {
    throw ConfigError("experiment defines no runs");
  }
  const std::vector<PartyTask> tasks = build_tasks(experiment.dataset);

  struct Prepared {
    std::filesystem::path dir;
    std::string resolved;
    std::string fingerprint;
  };
  std::vector<Prepared> prepared;
  prepared.reserve(experiment.runs.size());
  // Snapshots land on disk before any run begins.
  for (const RunSpec& run : experiment.runs) {
    Prepared p;
    p.dir = experiment.out_dir / run.name;
    std::filesystem::create_directories(p.dir);
    p.resolved = render_resolved_config(experiment.dataset, run);
    p.fingerprint = fingerprint_hex(p.resolved);
    write_file(p.dir / "config.resolved", p.resolved);
    prepared.push_back(std::move(p));
  }

  std::vector<RunSummary> summaries(experiment.runs.size());
  std::vector<std::exception_ptr> failures(experiment.runs.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min(jobs, experiment.runs.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= experiment.runs.size()) {
        return;
      }
      try {
        summaries[i] = execute_run(experiment.dataset, tasks, experiment.runs[i], prepared[i].dir,
                                   prepared[i].resolved, prepared[i].fingerprint);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
      t.join();
    }
  }
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (failures[i]) {
      std::rethrow_exception(failures[i]);
    }
  }
  if (log != nullptr) {
    for (std::size_t i = 0; i < summaries.size(); ++i) {
      (*log) << experiment.runs[i].name << ": final_avg_test_accuracy="
             << summaries[i].final_avg_test_accuracy << " rounds=" << summaries[i].rounds.size()
             << " wall=" << summaries[i].wall_clock_seconds << "s -> "
             << (prepared[i].dir / "rounds.csv").string() << '\n';
    }
  }
  return summaries;
}

}  // namespace fedplus
