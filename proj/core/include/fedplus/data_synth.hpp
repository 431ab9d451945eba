#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fedplus/models.hpp"

namespace fedplus {

/// Discrete power law P(c) proportional to c^-exponent, truncated to
/// [min_count, max_count].
struct CountLaw {
  double exponent = 1.5;
  std::size_t min_count = 64;
  std::size_t max_count = 1024;

  void validate(std::size_t classes) const;

  /// Exact mean of the truncated law by direct summation.
  double mean() const;
};

/// Heterogeneous synthetic classification tasks. Per party n the generator
/// draws a scalar u_n ~ N(0, zeta), fills the ground-truth weights and biases
/// with N(u_n, 1), draws a scalar feature-mean level B_n ~ N(0, beta), a mean
/// vector v_n with entries N(B_n, 1), and samples features x ~ N(v_n, Sigma)
/// with diagonal Sigma_jj = j^-1.2. Labels are the exact argmax of the
/// ground-truth logits. zeta and beta are variances (std = sqrt of them).
///
/// Sample counts come from the power law; each party's samples are split
/// train/test by the train fraction (the leading samples train, the rest
/// test; samples are i.i.d. so the cut is a random split).
///
/// Stream layout: counts use stream_seed(seed, {kCountsStream}); party n uses
/// stream_seed(seed, {kPartyStream, n}) and draws, in order, u_n, W row-major,
/// b, B_n, v, then per sample its feature_dim normals.
struct SynthSpec {
  double zeta = 1000.0;       // across-party model heterogeneity (variance of u_n)
  double beta = 10.0;         // across-party data heterogeneity (variance of B_n)
  std::size_t parties = 30;   // N
  std::size_t feature_dim = 60;
  std::size_t classes = 10;
  CountLaw count_law;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;

  /// Sigma_jj = j^-1.2 with j starting at 1: strictly positive, decreasing.
  std::vector<double> sigma_diag() const;

  LogisticModelShape model_shape() const { return {feature_dim, classes}; }

  void validate() const;
};

/// One party's ground truth and samples. Every label equals
/// argmax(truth_w x + truth_b) for its sample, exactly.
struct SyntheticTask {
  std::size_t party_index = 0;
  std::vector<double> truth_w;  // classes x feature_dim, row-major
  std::vector<double> truth_b;  // classes
  Batch train;
  Batch test;

  friend bool operator==(const SyntheticTask&, const SyntheticTask&) = default;
};

/// N sample counts i.i.d. from the truncated power law, deterministic per
/// seed.
std::vector<std::size_t> sample_counts(const CountLaw& law, std::size_t parties,
                                       std::uint64_t seed);

/// Generates all parties' tasks. Deterministic: identical spec and seed give
/// bit-identical tasks.
std::vector<SyntheticTask> generate(const SynthSpec& spec);

/// Columnar text export, one sample per line:
/// header `party,split,label,f0,...,f<d-1>`, floats with 17 significant
/// digits so values round-trip exactly.
void export_tasks(const std::vector<SyntheticTask>& tasks, std::ostream& out);

namespace stream {
inline constexpr std::uint64_t kCountsStream = 1;
inline constexpr std::uint64_t kPartyStream = 2;
}  // namespace stream

}  // namespace fedplus
