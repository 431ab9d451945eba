#pragma once

#include <cstddef>
#include <vector>

namespace fedplus {

/// Dense, fixed-length vector of model parameters. Length is set when the
/// federation run is configured; every operation on two vectors requires
/// matching lengths and throws DimensionError otherwise.
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(std::size_t dim, double fill = 0.0) : values_(dim, fill) {}
  explicit ParamVector(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  const std::vector<double>& values() const { return values_; }

  /// In-place *this += a * x.
  void add_scaled(double a, const ParamVector& x);

  friend bool operator==(const ParamVector&, const ParamVector&) = default;

 private:
  std::vector<double> values_;
};

/// Distance function B between a model and the central point:
/// squared-L2 is 0.5 * sum (x_d - c_d)^2; scaled-Q weights each coordinate
/// by a positive diagonal entry q_d. squared-L2 is exactly the scaled-Q case
/// with unit q.
struct DistanceSpec {
  enum class Kind { kSquaredL2, kScaledQ };

  Kind kind = Kind::kSquaredL2;
  std::vector<double> q_diag;  // scaled-Q only; all entries > 0

  /// Throws ConfigError if the spec is malformed for dimension `dim`.
  void validate(std::size_t dim) const;
};

void require_same_dim(const ParamVector& a, const ParamVector& b);

/// a * x + y, elementwise.
ParamVector axpy(double a, const ParamVector& x, const ParamVector& y);

/// 0.5 * sum_d q_d (x_d - c_d)^2, with q_d = 1 for squared-L2.
double distance(const DistanceSpec& spec, const ParamVector& x, const ParamVector& c);

/// Gradient of `distance` in x: elementwise q_d (x_d - c_d).
ParamVector distance_grad(const DistanceSpec& spec, const ParamVector& x, const ParamVector& c);

double dot(const ParamVector& a, const ParamVector& b);
double l2_norm(const ParamVector& v);
double l2_distance(const ParamVector& a, const ParamVector& b);

bool all_finite(const ParamVector& v);

}  // namespace fedplus
