#include "fedplus/aggregators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fedplus/errors.hpp"

namespace fedplus {

namespace {

void require_models(const std::vector<ParamVector>& models) {
  if (models.empty()) {
    throw AggregationError("cannot aggregate an empty model list");
  }
  for (const ParamVector& m : models) {
    require_same_dim(models.front(), m);
  }
}

std::vector<double> normalized_weights(const std::vector<double>& weights, std::size_t n) {
  std::vector<double> w;
  if (weights.empty()) {
    w.assign(n, 1.0 / static_cast<double>(n));
  } else {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = weights[i] / total;
    }
  }
  return w;
}

// Weighted mean computed relative to the first model. Deltas of identical
// models are exactly zero, so the mean of identical models is that model.
ParamVector weighted_mean(const std::vector<ParamVector>& models, const std::vector<double>& w) {
  ParamVector out = models.front();
  for (std::size_t n = 1; n < models.size(); ++n) {
    const ParamVector& x = models[n];
    for (std::size_t d = 0; d < out.size(); ++d) {
      out[d] += w[n] * (x[d] - models.front()[d]);
    }
  }
  return out;
}

// Weighted median with the lower-middle convention: smallest value whose
// cumulative weight reaches half the total. The comparison 2*cum >= total is
// exact for uniform unit weights, so even counts select the lower middle.
double weighted_median(std::vector<std::pair<double, double>>& value_weight) {
  std::sort(value_weight.begin(), value_weight.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double total = 0.0;
  for (const auto& [v, w] : value_weight) {
    total += w;
  }
  double cum = 0.0;
  for (const auto& [v, w] : value_weight) {
    cum += w;
    if (2.0 * cum >= total) {
      return v;
    }
  }
  return value_weight.back().first;
}

ParamVector coordinate_median(const std::vector<ParamVector>& models,
                              const std::vector<double>& raw_weights) {
  const std::size_t dim = models.front().size();
  ParamVector out(dim);
  std::vector<std::pair<double, double>> column(models.size());
  for (std::size_t d = 0; d < dim; ++d) {
    for (std::size_t n = 0; n < models.size(); ++n) {
      column[n] = {models[n][d], raw_weights.empty() ? 1.0 : raw_weights[n]};
    }
    out[d] = weighted_median(column);
  }
  return out;
}

}  // namespace

void CentralitySpec::validate(std::size_t model_count) const {
  if (!weights.empty()) {
    if (weights.size() != model_count) {
      throw ConfigError("centrality weights length " + std::to_string(weights.size()) +
                        " does not match model count " + std::to_string(model_count));
    }
    double total = 0.0;
    for (double w : weights) {
      if (!(w > 0.0)) {
        throw ConfigError("centrality weights must be strictly positive");
      }
      total += w;
    }
    if (!(total > 0.0)) {
      throw ConfigError("centrality weights must sum to a positive number");
    }
  }
  if (kind == Kind::kGeometricMedian) {
    if (weiszfeld_iters == 0) {
      throw ConfigError("weiszfeld_iters must be positive");
    }
    if (!(weiszfeld_tol > 0.0) || !(weiszfeld_smoothing > 0.0)) {
      throw ConfigError("weiszfeld tolerance and smoothing must be positive");
    }
  }
}

double geometric_median_objective(const ParamVector& z, const std::vector<ParamVector>& models,
                                  const std::vector<double>& weights) {
  require_models(models);
  require_same_dim(z, models.front());
  const std::vector<double> w = normalized_weights(weights, models.size());
  double acc = 0.0;
  for (std::size_t n = 0; n < models.size(); ++n) {
    acc += w[n] * l2_distance(z, models[n]);
  }
  return acc;
}

WeiszfeldResult weiszfeld_geometric_median(const CentralitySpec& spec,
                                           const std::vector<ParamVector>& models) {
  require_models(models);
  spec.validate(models.size());
  const std::vector<double> w = normalized_weights(spec.weights, models.size());

  WeiszfeldResult result;
  ParamVector z = weighted_mean(models, w);
  result.objectives.push_back(geometric_median_objective(z, models, spec.weights));

  ParamVector next(z.size());
  for (std::size_t it = 0; it < spec.weiszfeld_iters; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    double denom = 0.0;
    for (std::size_t n = 0; n < models.size(); ++n) {
      const double dist = std::max(l2_distance(z, models[n]), spec.weiszfeld_smoothing);
      const double coeff = w[n] / dist;
      denom += coeff;
      next.add_scaled(coeff, models[n]);
    }
    for (double& v : next) {
      v /= denom;
    }
    result.iterations = it + 1;
    const double step = l2_distance(next, z);
    z = next;
    result.objectives.push_back(geometric_median_objective(z, models, spec.weights));
    if (step < spec.weiszfeld_tol) {
      break;
    }
  }
  result.point = std::move(z);
  return result;
}

ParamVector aggregate(const CentralitySpec& spec, const std::vector<ParamVector>& models) {
  require_models(models);
  spec.validate(models.size());
  switch (spec.kind) {
    case CentralitySpec::Kind::kMean:
      return weighted_mean(models, normalized_weights(spec.weights, models.size()));
    case CentralitySpec::Kind::kGeometricMedian:
      return weiszfeld_geometric_median(spec, models).point;
    case CentralitySpec::Kind::kCoordinateMedian:
      return coordinate_median(models, spec.weights);
  }
  throw ConfigError("unknown centrality kind");
}

}  // namespace fedplus
