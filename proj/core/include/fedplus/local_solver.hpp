#pragma once

#include <cstddef>
#include <functional>

#include "fedplus/models.hpp"
#include "fedplus/param_space.hpp"
#include "fedplus/rng.hpp"

namespace fedplus {

/// Per-round penalty strength. Constant stays at alpha0; geometric decay
/// gives alpha0 * decay^(k-1) at round k (rounds count from 1).
struct AlphaSchedule {
  enum class Kind { kConstant, kGeometricDecay };

  Kind kind = Kind::kConstant;
  double alpha0 = 0.0;
  double decay = 0.99;

  void validate() const;
};

double advance_alpha(const AlphaSchedule& schedule, std::size_t round);

/// Whether a party starts a round from its own previous model or from the
/// central point.
enum class StartMode { kPersist, kResetToCentral };

/// kFullBatch makes every step use the whole dataset.
inline constexpr std::size_t kFullBatch = 0;

struct LocalSolveSpec {
  std::size_t steps = 1;       // T, local iterations per round
  double learning_rate = 0.01; // gamma, constant within a round
  double alpha = 0.0;          // penalty strength for this round
  StartMode start_mode = StartMode::kPersist;
  std::size_t batch_size = 32; // kFullBatch for deterministic full-batch steps
  DistanceSpec distance;

  void validate() const;
};

/// Loss/gradient of one party's objective over a batch. Diagnostic
/// objectives that carry no data ignore the batch argument.
struct ObjectiveFns {
  std::function<double(const ParamVector&, const Batch&)> loss;
  std::function<ParamVector(const ParamVector&, const Batch&)> grad;
};

/// Runs exactly `spec.steps` penalized gradient steps
///   x <- x - gamma * (grad_f(x, batch) + alpha * grad B(x, x_hat))
/// from x_start, holding x_hat fixed. Minibatches of `batch_size` samples
/// are drawn uniformly with replacement from `data` each step; kFullBatch
/// uses all of `data` and draws nothing from the rng. The alpha = 0 path
/// skips the penalty term entirely, so those trajectories match isolated
/// training bit for bit.
///
/// Throws NumericalFailure naming the step if a gradient or iterate goes
/// non-finite.
ParamVector local_solve(const LocalSolveSpec& spec, const ObjectiveFns& fns, const Batch& data,
                        const ParamVector& x_start, const ParamVector& x_hat, Rng& rng);

/// The same update written as a convex combination:
///   (1 - gamma*alpha) * x + gamma*alpha * x_hat - gamma * grad_f.
/// Kept as a distinct computation path from the penalized form so the two
/// can be checked against each other.
ParamVector convex_combination_step(const ParamVector& x, const ParamVector& x_hat, double gamma,
                                    double alpha, const ParamVector& grad_f);

}  // namespace fedplus
