#pragma once

#include <cstdint>
#include <initializer_list>

namespace fedplus {

/// splitmix64 finalizer: full-avalanche 64-bit mix.
std::uint64_t mix64(std::uint64_t v);

/// Deterministic seed for a child stream. Children are derived from the
/// parent seed and a tag sequence, never from evolving generator state, so
/// the set of streams a run uses is independent of the order in which they
/// are drawn from. Conventional tag layouts:
///
///   stream_seed(seed, {purpose})                 global streams
///   stream_seed(seed, {purpose, index})          per-party streams
///   stream_seed(seed, {purpose, round, party})   per-(round, party) streams
std::uint64_t stream_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

/// splitmix64 generator (Steele, Lea & Flood; Vigna's reference mixer).
/// 64-bit state, period 2^64, identical output on every platform. All
/// randomness in the library flows through this class so a run is fully
/// reproducible from one seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);

  /// Standard normal via Box-Muller. Consumes exactly two 64-bit draws per
  /// call (no cached spare), which keeps stream accounting trivial.
  double normal();
  double normal(double mean, double stddev);

  /// Uniform integer in [0, n). Modulo reduction; the bias is ~n/2^64 and
  /// irrelevant at the scales used here. n must be > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

}  // namespace fedplus
