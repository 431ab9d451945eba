// Independent reference implementations used as test oracles. Everything in
// here recomputes results through a different route than the library code it
// checks: direct long-double evaluation, finite differences, or brute-force
// search.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "fedplus/models.hpp"
#include "fedplus/param_space.hpp"

namespace oracles {

// Central finite differences of a scalar function, step h per coordinate.
inline fedplus::ParamVector finite_difference_grad(
    const std::function<double(const fedplus::ParamVector&)>& f, const fedplus::ParamVector& x,
    double h) {
  fedplus::ParamVector grad(x.size());
  fedplus::ParamVector probe = x;
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double saved = probe[d];
    probe[d] = saved + h;
    const double up = f(probe);
    probe[d] = saved - h;
    const double down = f(probe);
    probe[d] = saved;
    grad[d] = (up - down) / (2.0 * h);
  }
  return grad;
}

inline double relative_vector_error(const fedplus::ParamVector& a, const fedplus::ParamVector& b) {
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    diff += (a[d] - b[d]) * (a[d] - b[d]);
    scale += a[d] * a[d];
  }
  return std::sqrt(diff) / std::max(1.0, std::sqrt(scale));
}

// Plain long-double softmax cross-entropy, no log-sum-exp rearrangement.
inline double direct_logistic_loss(const fedplus::LogisticModelShape& shape,
                                   const fedplus::ParamVector& params,
                                   const fedplus::Batch& batch) {
  long double total = 0.0L;
  for (std::size_t i = 0; i < batch.count(); ++i) {
    const auto x = batch.row(i);
    std::vector<long double> expz(shape.classes);
    long double sum = 0.0L;
    for (std::size_t c = 0; c < shape.classes; ++c) {
      long double z = params[shape.bias_index(c)];
      for (std::size_t j = 0; j < shape.features; ++j) {
        z += static_cast<long double>(params[shape.weight_index(c, j)]) * x[j];
      }
      expz[c] = std::exp(z);
      sum += expz[c];
    }
    total += -std::log(expz[batch.labels[i]] / sum);
  }
  return static_cast<double>(total / static_cast<long double>(batch.count()));
}

// Independent argmax predictor (long double logits, first maximum wins).
inline int direct_logistic_predict(const fedplus::LogisticModelShape& shape,
                                   const fedplus::ParamVector& params,
                                   std::span<const double> x) {
  int best = 0;
  long double best_z = -1e4932L;
  for (std::size_t c = 0; c < shape.classes; ++c) {
    long double z = params[shape.bias_index(c)];
    for (std::size_t j = 0; j < shape.features; ++j) {
      z += static_cast<long double>(params[shape.weight_index(c, j)]) * x[j];
    }
    if (z > best_z) {
      best_z = z;
      best = static_cast<int>(c);
    }
  }
  return best;
}

// Brute-force geometric median on a 2-D grid, refined around the incumbent.
// grid_n x grid_n cells per pass; each refinement shrinks the box to a few
// cells around the best point.
struct GridBox {
  double x_lo, x_hi, y_lo, y_hi;
};

inline fedplus::ParamVector grid_search_geometric_median(
    const std::vector<fedplus::ParamVector>& points, GridBox box, std::size_t grid_n = 400,
    std::size_t refinements = 2) {
  auto objective = [&](double zx, double zy) {
    double total = 0.0;
    for (const auto& p : points) {
      total += std::hypot(zx - p[0], zy - p[1]);
    }
    return total;
  };
  double best_x = 0.5 * (box.x_lo + box.x_hi);
  double best_y = 0.5 * (box.y_lo + box.y_hi);
  for (std::size_t pass = 0; pass <= refinements; ++pass) {
    const double dx = (box.x_hi - box.x_lo) / static_cast<double>(grid_n);
    const double dy = (box.y_hi - box.y_lo) / static_cast<double>(grid_n);
    double best = objective(best_x, best_y);
    for (std::size_t i = 0; i <= grid_n; ++i) {
      const double zx = box.x_lo + dx * static_cast<double>(i);
      for (std::size_t j = 0; j <= grid_n; ++j) {
        const double zy = box.y_lo + dy * static_cast<double>(j);
        const double value = objective(zx, zy);
        if (value < best) {
          best = value;
          best_x = zx;
          best_y = zy;
        }
      }
    }
    box = {best_x - 2.0 * dx, best_x + 2.0 * dx, best_y - 2.0 * dy, best_y + 2.0 * dy};
  }
  fedplus::ParamVector out(2);
  out[0] = best_x;
  out[1] = best_y;
  return out;
}

inline GridBox bounding_box(const std::vector<fedplus::ParamVector>& points, double pad) {
  GridBox box{points[0][0], points[0][0], points[0][1], points[0][1]};
  for (const auto& p : points) {
    box.x_lo = std::min(box.x_lo, p[0]);
    box.x_hi = std::max(box.x_hi, p[0]);
    box.y_lo = std::min(box.y_lo, p[1]);
    box.y_hi = std::max(box.y_hi, p[1]);
  }
  box.x_lo -= pad;
  box.x_hi += pad;
  box.y_lo -= pad;
  box.y_hi += pad;
  return box;
}

// Exact mean of the truncated discrete power law by long-double summation.
inline double truncated_power_law_mean(double exponent, std::size_t lo, std::size_t hi) {
  long double num = 0.0L;
  long double den = 0.0L;
  for (std::size_t c = lo; c <= hi; ++c) {
    const long double p = std::pow(static_cast<long double>(c), -
                                   static_cast<long double>(exponent));
    num += static_cast<long double>(c) * p;
    den += p;
  }
  return static_cast<double>(num / den);
}

}  // namespace oracles
