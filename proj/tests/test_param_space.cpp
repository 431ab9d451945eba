#include <doctest.h>

#include "fedplus/errors.hpp"
#include "fedplus/param_space.hpp"
#include "fedplus/rng.hpp"
#include "support/oracles.hpp"

using namespace fedplus;

namespace {

ParamVector vec(std::initializer_list<double> values) {
  return ParamVector(std::vector<double>(values));
}

ParamVector random_vector(Rng& rng, std::size_t dim, double lo = -2.0, double hi = 2.0) {
  ParamVector out(dim);
  for (double& v : out) {
    v = rng.uniform(lo, hi);
  }
  return out;
}

}  // namespace

TEST_CASE("axpy hand cases") {
  CHECK(axpy(0.0, vec({1, 2}), vec({3, 4})) == vec({3, 4}));
  CHECK(axpy(1.0, vec({1, 2}), vec({3, 4})) == vec({4, 6}));
  CHECK(axpy(-2.0, vec({1, 0}), vec({0, 1})) == vec({-2, 1}));
}

TEST_CASE("axpy rejects mismatched lengths") {
  CHECK_THROWS_AS(axpy(1.0, vec({1, 2}), vec({1, 2, 3})), DimensionError);
}

TEST_CASE("distance hand cases") {
  DistanceSpec l2;
  CHECK(distance(l2, vec({1, 2}), vec({1, 2})) == 0.0);
  CHECK(distance(l2, vec({3, 0}), vec({0, 4})) == doctest::Approx(12.5));

  DistanceSpec q{DistanceSpec::Kind::kScaledQ, {2.0, 1.0}};
  CHECK(distance(q, vec({1, 1}), vec({0, 0})) == doctest::Approx(1.5));
}

TEST_CASE("distance spec validation") {
  DistanceSpec q{DistanceSpec::Kind::kScaledQ, {1.0, -1.0}};
  CHECK_THROWS_AS(distance(q, vec({1, 1}), vec({0, 0})), ConfigError);
  DistanceSpec missing{DistanceSpec::Kind::kScaledQ, {}};
  CHECK_THROWS_AS(distance(missing, vec({1, 1}), vec({0, 0})), ConfigError);
}

TEST_CASE("distance_grad hand cases") {
  DistanceSpec l2;
  CHECK(distance_grad(l2, vec({1, 2}), vec({1, 2})) == vec({0, 0}));
  CHECK(distance_grad(l2, vec({3, 0}), vec({0, 4})) == vec({3, -4}));
}

TEST_CASE("squared-L2 equals scaled-Q with unit diagonal, bitwise") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ParamVector x = random_vector(rng, 7);
    const ParamVector c = random_vector(rng, 7);
    DistanceSpec l2;
    DistanceSpec unit_q{DistanceSpec::Kind::kScaledQ, std::vector<double>(7, 1.0)};
    CHECK(distance(l2, x, c) == distance(unit_q, x, c));
    CHECK(distance_grad(l2, x, c) == distance_grad(unit_q, x, c));
  }
}

TEST_CASE("distance is non-negative and zero only at coincidence") {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const ParamVector x = random_vector(rng, 5);
    const ParamVector c = random_vector(rng, 5);
    DistanceSpec q{DistanceSpec::Kind::kScaledQ, {}};
    q.q_diag.resize(5);
    for (double& v : q.q_diag) {
      v = rng.uniform(0.1, 3.0);
    }
    const double value = distance(q, x, c);
    CHECK(value >= 0.0);
    if (x == c) {
      CHECK(value == 0.0);
    } else {
      CHECK(value > 0.0);
    }
    CHECK(distance(q, x, x) == 0.0);
  }
}

TEST_CASE("distance_grad matches central finite differences") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + rng.below(8);
    const ParamVector x = random_vector(rng, dim);
    const ParamVector c = random_vector(rng, dim);
    DistanceSpec spec;
    if (trial % 2 == 0) {
      spec.kind = DistanceSpec::Kind::kScaledQ;
      spec.q_diag.resize(dim);
      for (double& v : spec.q_diag) {
        v = rng.uniform(0.2, 4.0);
      }
    }
    const ParamVector analytic = distance_grad(spec, x, c);
    const ParamVector numeric = oracles::finite_difference_grad(
        [&](const ParamVector& p) { return distance(spec, p, c); }, x, 1e-5);
    CHECK(oracles::relative_vector_error(analytic, numeric) < 1e-5);
  }
}

TEST_CASE("all_finite flags bad entries") {
  ParamVector v = vec({1, 2, 3});
  CHECK(all_finite(v));
  v[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(all_finite(v));
  v[1] = std::numeric_limits<double>::infinity();
  CHECK_FALSE(all_finite(v));
}
