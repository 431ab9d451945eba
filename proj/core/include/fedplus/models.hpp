#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fedplus/param_space.hpp"

namespace fedplus {

/// Labeled samples with dense features. Features are stored row-major,
/// count() x feature_dim.
struct Batch {
  std::size_t feature_dim = 0;
  std::vector<double> features;
  std::vector<int> labels;

  std::size_t count() const { return labels.size(); }

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * feature_dim, feature_dim};
  }

  void push_sample(std::span<const double> x, int label);

  /// New batch holding the given rows (duplicates allowed).
  Batch subset(std::span<const std::uint32_t> indices) const;

  /// Throws DataError on count mismatches, emptiness, or labels outside
  /// [0, num_classes).
  void validate(std::size_t num_classes) const;

  friend bool operator==(const Batch&, const Batch&) = default;
};

/// Multinomial logistic regression over `features` inputs and `classes`
/// outputs. Parameters are packed as the weight matrix W in row-major,
/// class-major order (entry for class c, feature j at index c*features + j)
/// followed by the `classes` bias entries.
struct LogisticModelShape {
  std::size_t features = 0;  // d_in
  std::size_t classes = 0;   // d_out

  std::size_t param_count() const { return classes * features + classes; }
  std::size_t weight_index(std::size_t c, std::size_t j) const { return c * features + j; }
  std::size_t bias_index(std::size_t c) const { return classes * features + c; }
};

/// Mean cross-entropy -log softmax(Wx + b)[label] over the batch.
/// Log-sum-exp is computed against the max logit so large parameter drift
/// cannot overflow.
double logistic_loss(const LogisticModelShape& shape, const ParamVector& params,
                     const Batch& batch);

/// Exact gradient of logistic_loss, packed like `params`.
ParamVector logistic_grad(const LogisticModelShape& shape, const ParamVector& params,
                          const Batch& batch);

/// Fraction of argmax predictions matching the labels; argmax ties go to the
/// lowest class index.
double logistic_accuracy(const LogisticModelShape& shape, const ParamVector& params,
                         const Batch& batch);

/// Diagnostic objective 0.5 * ||x - center||^2 with a known optimum.
double quadratic_loss(const ParamVector& center, const ParamVector& params);
ParamVector quadratic_grad(const ParamVector& center, const ParamVector& params);

}  // namespace fedplus
