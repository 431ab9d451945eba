#include "fedplus/data_synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "fedplus/errors.hpp"
#include "fedplus/rng.hpp"

namespace fedplus {

void CountLaw::validate(std::size_t classes) const {
  if (min_count == 0 || max_count < min_count) {
    throw ConfigError("count law needs 0 < min_count <= max_count");
  }
  if (min_count < classes) {
    throw ConfigError("count law min_count " + std::to_string(min_count) +
                      " is below the class count " + std::to_string(classes));
  }
  if (!(exponent >= 0.0)) {
    throw ConfigError("count law exponent must be non-negative");
  }
}

double CountLaw::mean() const {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t c = min_count; c <= max_count; ++c) {
    const double p = std::pow(static_cast<double>(c), -exponent);
    num += static_cast<double>(c) * p;
    den += p;
  }
  return num / den;
}

std::vector<double> SynthSpec::sigma_diag() const {
  std::vector<double> sigma(feature_dim);
  for (std::size_t j = 0; j < feature_dim; ++j) {
    sigma[j] = std::pow(static_cast<double>(j + 1), -1.2);
  }
  return sigma;
}

void SynthSpec::validate() const {
  if (!(zeta >= 0.0) || !(beta >= 0.0)) {
    throw ConfigError("zeta and beta must be non-negative");
  }
  if (parties == 0) {
    throw ConfigError("at least one party is required");
  }
  if (feature_dim == 0 || classes < 2) {
    throw ConfigError("need feature_dim >= 1 and classes >= 2");
  }
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie in (0, 1)");
  }
  count_law.validate(classes);
}

std::vector<std::size_t> sample_counts(const CountLaw& law, std::size_t parties,
                                       std::uint64_t seed) {
  law.validate(0);
  // Inverse-CDF sampling over the finite support.
  const std::size_t support = law.max_count - law.min_count + 1;
  std::vector<double> cdf(support);
  double total = 0.0;
  for (std::size_t i = 0; i < support; ++i) {
    total += std::pow(static_cast<double>(law.min_count + i), -law.exponent);
    cdf[i] = total;
  }
  Rng rng(stream_seed(seed, {stream::kCountsStream}));
  std::vector<std::size_t> counts(parties);
  for (std::size_t n = 0; n < parties; ++n) {
    const double u = rng.uniform() * total;
    std::size_t lo = 0;
    std::size_t hi = support - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (cdf[mid] < u) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    counts[n] = law.min_count + lo;
  }
  return counts;
}

namespace {

int truth_label(const SynthSpec& spec, const std::vector<double>& w, const std::vector<double>& b,
                std::span<const double> x) {
  int best = 0;
  double best_z = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < spec.classes; ++c) {
    double z = b[c];
    const double* wc = w.data() + c * spec.feature_dim;
    for (std::size_t j = 0; j < spec.feature_dim; ++j) {
      z += wc[j] * x[j];
    }
    if (z > best_z) {
      best_z = z;
      best = static_cast<int>(c);
    }
  }
  return best;
}

}  // namespace

std::vector<SyntheticTask> generate(const SynthSpec& spec) {
  spec.validate();
  const std::vector<std::size_t> counts =
      sample_counts(spec.count_law, spec.parties, spec.seed);
  const std::vector<double> sigma = spec.sigma_diag();
  std::vector<double> sigma_std(sigma.size());
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    sigma_std[j] = std::sqrt(sigma[j]);
  }
  const double u_std = std::sqrt(spec.zeta);
  const double b_std = std::sqrt(spec.beta);

  std::vector<SyntheticTask> tasks;
  tasks.reserve(spec.parties);
  std::vector<double> x(spec.feature_dim);
  for (std::size_t n = 0; n < spec.parties; ++n) {
    Rng rng(stream_seed(spec.seed, {stream::kPartyStream, n}));
    SyntheticTask task;
    task.party_index = n;

    const double u_n = rng.normal(0.0, u_std);
    task.truth_w.resize(spec.classes * spec.feature_dim);
    for (double& w : task.truth_w) {
      w = rng.normal(u_n, 1.0);
    }
    task.truth_b.resize(spec.classes);
    for (double& b : task.truth_b) {
      b = rng.normal(u_n, 1.0);
    }

    const double level_n = rng.normal(0.0, b_std);
    std::vector<double> v(spec.feature_dim);
    for (double& vj : v) {
      vj = rng.normal(level_n, 1.0);
    }

    // Both splits stay non-empty even at tiny counts.
    const std::size_t count = counts[n];
    const std::size_t train_count = std::clamp<std::size_t>(
        static_cast<std::size_t>(spec.train_fraction * static_cast<double>(count)),
        1, count - 1);
    task.train.feature_dim = spec.feature_dim;
    task.test.feature_dim = spec.feature_dim;
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < spec.feature_dim; ++j) {
        x[j] = v[j] + sigma_std[j] * rng.normal();
      }
      const int y = truth_label(spec, task.truth_w, task.truth_b, x);
      Batch& split = (i < train_count) ? task.train : task.test;
      split.push_sample(x, y);
    }
    tasks.push_back(std::move(task));
  }
  return tasks;
}

void export_tasks(const std::vector<SyntheticTask>& tasks, std::ostream& out) {
  if (tasks.empty()) {
    throw DataError("no tasks to export");
  }
  const std::size_t dim = tasks.front().train.feature_dim;
  out << "party,split,label";
  for (std::size_t j = 0; j < dim; ++j) {
    out << ",f" << j;
  }
  out << '\n';
  char buf[32];
  auto write_batch = [&](const SyntheticTask& task, const Batch& batch, const char* split) {
    for (std::size_t i = 0; i < batch.count(); ++i) {
      out << task.party_index << ',' << split << ',' << batch.labels[i];
      const auto row = batch.row(i);
      for (double v : row) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << ',' << buf;
      }
      out << '\n';
    }
  };
  for (const SyntheticTask& task : tasks) {
    write_batch(task, task.train, "train");
    write_batch(task, task.test, "test");
  }
}

}  // namespace fedplus
