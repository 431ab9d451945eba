#include "fedplus/local_solver.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "fedplus/errors.hpp"

namespace fedplus {

void AlphaSchedule::validate() const {
  if (!(alpha0 >= 0.0)) {
    throw ConfigError("alpha0 must be non-negative");
  }
  if (kind == Kind::kGeometricDecay && (!(decay > 0.0) || decay > 1.0)) {
    throw ConfigError("alpha decay must lie in (0, 1]");
  }
}

double advance_alpha(const AlphaSchedule& schedule, std::size_t round) {
  schedule.validate();
  if (round == 0) {
    throw ConfigError("rounds count from 1");
  }
  if (schedule.kind == AlphaSchedule::Kind::kConstant) {
    return schedule.alpha0;
  }
  return schedule.alpha0 * std::pow(schedule.decay, static_cast<double>(round - 1));
}

void LocalSolveSpec::validate() const {
  if (!(learning_rate > 0.0)) {
    throw ConfigError("learning rate must be positive");
  }
  if (!(alpha >= 0.0)) {
    throw ConfigError("alpha must be non-negative");
  }
}

ParamVector local_solve(const LocalSolveSpec& spec, const ObjectiveFns& fns, const Batch& data,
                        const ParamVector& x_start, const ParamVector& x_hat, Rng& rng) {
  spec.validate();
  require_same_dim(x_start, x_hat);

  const bool full_batch = spec.batch_size == kFullBatch || data.count() == 0;
  ParamVector x = x_start;
  std::vector<std::uint32_t> indices;
  for (std::size_t t = 0; t < spec.steps; ++t) {
    ParamVector grad;
    if (full_batch) {
      grad = fns.grad(x, data);
    } else {
      indices.resize(spec.batch_size);
      for (std::uint32_t& idx : indices) {
        idx = static_cast<std::uint32_t>(rng.below(data.count()));
      }
      grad = fns.grad(x, data.subset(indices));
    }
    if (!all_finite(grad)) {
      throw NumericalFailure("non-finite gradient at local step " + std::to_string(t + 1));
    }
    if (spec.alpha != 0.0) {
      const ParamVector penalty = distance_grad(spec.distance, x, x_hat);
      for (std::size_t d = 0; d < x.size(); ++d) {
        x[d] -= spec.learning_rate * (grad[d] + spec.alpha * penalty[d]);
      }
    } else {
      for (std::size_t d = 0; d < x.size(); ++d) {
        x[d] -= spec.learning_rate * grad[d];
      }
    }
    if (!all_finite(x)) {
      throw NumericalFailure("non-finite iterate at local step " + std::to_string(t + 1));
    }
  }
  return x;
}

ParamVector convex_combination_step(const ParamVector& x, const ParamVector& x_hat, double gamma,
                                    double alpha, const ParamVector& grad_f) {
  require_same_dim(x, x_hat);
  require_same_dim(x, grad_f);
  const double pull = gamma * alpha;  // alpha-hat
  ParamVector out(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) {
    out[d] = (1.0 - pull) * x[d] + pull * x_hat[d] - gamma * grad_f[d];
  }
  return out;
}

}  // namespace fedplus
