#include "fedplus/param_space.hpp"

#include <cmath>
#include <string>

#include "fedplus/errors.hpp"

namespace fedplus {

void require_same_dim(const ParamVector& a, const ParamVector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("parameter vectors have lengths " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
  }
}

void ParamVector::add_scaled(double a, const ParamVector& x) {
  require_same_dim(*this, x);
  for (std::size_t d = 0; d < values_.size(); ++d) {
    values_[d] += a * x[d];
  }
}

void DistanceSpec::validate(std::size_t dim) const {
  if (kind == Kind::kScaledQ) {
    if (q_diag.size() != dim) {
      throw ConfigError("scaled-Q distance needs a q_diag of length " + std::to_string(dim) +
                        ", got " + std::to_string(q_diag.size()));
    }
    for (double q : q_diag) {
      if (!(q > 0.0)) {
        throw ConfigError("scaled-Q distance requires strictly positive q_diag entries");
      }
    }
  }
}

ParamVector axpy(double a, const ParamVector& x, const ParamVector& y) {
  require_same_dim(x, y);
  ParamVector out(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) {
    out[d] = a * x[d] + y[d];
  }
  return out;
}

double distance(const DistanceSpec& spec, const ParamVector& x, const ParamVector& c) {
  require_same_dim(x, c);
  spec.validate(x.size());
  double acc = 0.0;
  if (spec.kind == DistanceSpec::Kind::kScaledQ) {
    for (std::size_t d = 0; d < x.size(); ++d) {
      const double diff = x[d] - c[d];
      acc += spec.q_diag[d] * diff * diff;
    }
  } else {
    for (std::size_t d = 0; d < x.size(); ++d) {
      const double diff = x[d] - c[d];
      acc += diff * diff;
    }
  }
  return 0.5 * acc;
}

ParamVector distance_grad(const DistanceSpec& spec, const ParamVector& x, const ParamVector& c) {
  require_same_dim(x, c);
  spec.validate(x.size());
  ParamVector out(x.size());
  if (spec.kind == DistanceSpec::Kind::kScaledQ) {
    for (std::size_t d = 0; d < x.size(); ++d) {
      out[d] = spec.q_diag[d] * (x[d] - c[d]);
    }
  } else {
    for (std::size_t d = 0; d < x.size(); ++d) {
      out[d] = x[d] - c[d];
    }
  }
  return out;
}

double dot(const ParamVector& a, const ParamVector& b) {
  require_same_dim(a, b);
  double acc = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    acc += a[d] * b[d];
  }
  return acc;
}

double l2_norm(const ParamVector& v) {
  double acc = 0.0;
  for (double x : v) {
    acc += x * x;
  }
  return std::sqrt(acc);
}

double l2_distance(const ParamVector& a, const ParamVector& b) {
  require_same_dim(a, b);
  double acc = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

bool all_finite(const ParamVector& v) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      return false;
    }
  }
  return true;
}

}  // namespace fedplus
