#pragma once

#include <cstddef>
#include <vector>

#include "fedplus/param_space.hpp"

namespace fedplus {

/// Centrality function C(X) applied to the party models each round.
///
/// - mean: weighted arithmetic mean.
/// - geometric-median: approximate argmin_z sum_n w_n ||z - x_n|| by smoothed
///   Weiszfeld iteration started at the weighted mean. The smoothing nu
///   clamps distances away from zero near coincident points.
/// - coordinate-median: per-dimension weighted median; when the halfway mass
///   falls exactly on a boundary the lower of the two middle values wins, so
///   the output is always a selection of observed values.
struct CentralitySpec {
  enum class Kind { kMean, kGeometricMedian, kCoordinateMedian };

  Kind kind = Kind::kMean;

  /// One positive weight per model; empty means uniform. Normalized
  /// internally to sum 1.
  std::vector<double> weights;

  std::size_t weiszfeld_iters = 64;
  double weiszfeld_tol = 1e-10;
  double weiszfeld_smoothing = 1e-8;  // nu

  void validate(std::size_t model_count) const;
};

/// Central point of the given models. Throws AggregationError on an empty
/// list, DimensionError on mismatched lengths, ConfigError on a bad spec.
ParamVector aggregate(const CentralitySpec& spec, const std::vector<ParamVector>& models);

/// sum_n w_n ||z - x_n||, uniform weights when `weights` is empty.
double geometric_median_objective(const ParamVector& z, const std::vector<ParamVector>& models,
                                  const std::vector<double>& weights = {});

/// Weiszfeld solve with per-iteration objective values, for diagnostics and
/// the monotonicity checks.
struct WeiszfeldResult {
  ParamVector point;
  std::vector<double> objectives;  // objective after each iterate, starting point first
  std::size_t iterations = 0;
};

WeiszfeldResult weiszfeld_geometric_median(const CentralitySpec& spec,
                                           const std::vector<ParamVector>& models);

}  // namespace fedplus
