#include "fedplus/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fedplus/errors.hpp"

namespace fedplus {

namespace {

void require_params(const LogisticModelShape& shape, const ParamVector& params) {
  if (params.size() != shape.param_count()) {
    throw DimensionError("logistic model expects " + std::to_string(shape.param_count()) +
                         " parameters, got " + std::to_string(params.size()));
  }
}

void require_batch(const LogisticModelShape& shape, const Batch& batch) {
  batch.validate(shape.classes);
  if (batch.feature_dim != shape.features) {
    throw DataError("batch feature dimension " + std::to_string(batch.feature_dim) +
                    " does not match model input " + std::to_string(shape.features));
  }
}

void compute_logits(const LogisticModelShape& shape, const ParamVector& params,
                    std::span<const double> x, std::vector<double>& logits) {
  logits.resize(shape.classes);
  for (std::size_t c = 0; c < shape.classes; ++c) {
    const double* w = params.data() + shape.weight_index(c, 0);
    double z = params[shape.bias_index(c)];
    for (std::size_t j = 0; j < shape.features; ++j) {
      z += w[j] * x[j];
    }
    logits[c] = z;
  }
}

std::size_t argmax_lowest(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) {
      best = i;
    }
  }
  return best;
}

}  // namespace

void Batch::push_sample(std::span<const double> x, int label) {
  features.insert(features.end(), x.begin(), x.end());
  labels.push_back(label);
}

Batch Batch::subset(std::span<const std::uint32_t> indices) const {
  Batch out;
  out.feature_dim = feature_dim;
  out.features.reserve(indices.size() * feature_dim);
  out.labels.reserve(indices.size());
  for (std::uint32_t i : indices) {
    out.push_sample(row(i), labels[i]);
  }
  return out;
}

void Batch::validate(std::size_t num_classes) const {
  if (labels.empty()) {
    throw DataError("batch is empty");
  }
  if (feature_dim == 0 || features.size() != labels.size() * feature_dim) {
    throw DataError("batch feature storage does not match label count");
  }
  for (int label : labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= num_classes) {
      throw DataError("label " + std::to_string(label) + " outside [0, " +
                      std::to_string(num_classes) + ")");
    }
  }
}

double logistic_loss(const LogisticModelShape& shape, const ParamVector& params,
                     const Batch& batch) {
  require_params(shape, params);
  require_batch(shape, batch);
  std::vector<double> logits;
  double total = 0.0;
  for (std::size_t i = 0; i < batch.count(); ++i) {
    compute_logits(shape, params, batch.row(i), logits);
    const double zmax = *std::max_element(logits.begin(), logits.end());
    double sum_exp = 0.0;
    for (double z : logits) {
      sum_exp += std::exp(z - zmax);
    }
    total += std::log(sum_exp) - (logits[batch.labels[i]] - zmax);
  }
  return total / static_cast<double>(batch.count());
}

ParamVector logistic_grad(const LogisticModelShape& shape, const ParamVector& params,
                          const Batch& batch) {
  require_params(shape, params);
  require_batch(shape, batch);
  ParamVector grad(shape.param_count());
  std::vector<double> logits;
  std::vector<double> probs(shape.classes);
  for (std::size_t i = 0; i < batch.count(); ++i) {
    const auto x = batch.row(i);
    compute_logits(shape, params, x, logits);
    const double zmax = *std::max_element(logits.begin(), logits.end());
    double sum_exp = 0.0;
    for (std::size_t c = 0; c < shape.classes; ++c) {
      probs[c] = std::exp(logits[c] - zmax);
      sum_exp += probs[c];
    }
    for (std::size_t c = 0; c < shape.classes; ++c) {
      probs[c] /= sum_exp;
    }
    for (std::size_t c = 0; c < shape.classes; ++c) {
      const double residual = probs[c] - (static_cast<std::size_t>(batch.labels[i]) == c ? 1.0 : 0.0);
      double* gw = grad.data() + shape.weight_index(c, 0);
      for (std::size_t j = 0; j < shape.features; ++j) {
        gw[j] += residual * x[j];
      }
      grad[shape.bias_index(c)] += residual;
    }
  }
  const double scale = 1.0 / static_cast<double>(batch.count());
  for (double& g : grad) {
    g *= scale;
  }
  return grad;
}

double logistic_accuracy(const LogisticModelShape& shape, const ParamVector& params,
                         const Batch& batch) {
  require_params(shape, params);
  require_batch(shape, batch);
  std::vector<double> logits;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < batch.count(); ++i) {
    compute_logits(shape, params, batch.row(i), logits);
    if (argmax_lowest(logits) == static_cast<std::size_t>(batch.labels[i])) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(batch.count());
}

double quadratic_loss(const ParamVector& center, const ParamVector& params) {
  require_same_dim(center, params);
  double acc = 0.0;
  for (std::size_t d = 0; d < center.size(); ++d) {
    const double diff = params[d] - center[d];
    acc += diff * diff;
  }
  return 0.5 * acc;
}

ParamVector quadratic_grad(const ParamVector& center, const ParamVector& params) {
  require_same_dim(center, params);
  ParamVector out(center.size());
  for (std::size_t d = 0; d < center.size(); ++d) {
    out[d] = params[d] - center[d];
  }
  return out;
}

}  // namespace fedplus
