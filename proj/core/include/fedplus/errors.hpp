#pragma once

#include <stdexcept>
#include <string>

namespace fedplus {

/// Mismatched vector/model lengths.
class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid specification or experiment file contents.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed data (bad labels, empty batches where samples are required).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Aggregation over an empty model list.
class AggregationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite value produced during optimization. Carries enough context
/// (step, and once it propagates through the engine, round and party) to
/// locate the failure.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fedplus
