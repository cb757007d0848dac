#pragma once

// Reproducible random streams. A stream is addressed by (seed, stream_id):
// the same pair always yields the same sequence, distinct stream_ids give
// statistically independent sequences, and parallel consumers can derive
// per-task substreams without coordination. The generator is xoshiro256++
// seeded through splitmix64; all variates (uniform, normal, exponential,
// gamma) are produced by fixed in-house algorithms so that output does not
// depend on the standard library implementation.

#include <cstdint>

namespace asepkpz {

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();

  // Standard normal via Box-Muller (second variate cached).
  double normal();

  // Exponential with mean 1.
  double exponential();

  // Gamma(shape, rate = 1), shape > 0. Marsaglia-Tsang squeeze; shapes below
  // one use the Gamma(shape + 1) boost with a uniform power correction.
  double gamma(double shape);

  // Integer uniform on {0, 1, ..., n-1}, n >= 1 (rejection, unbiased).
  std::uint64_t below(std::uint64_t n);

  // Derived stream for subtask k: deterministic, collision-free in k for a
  // fixed parent. Used to give every Monte Carlo sample its own stream so
  // results do not depend on scheduling.
  RandomStream substream(std::uint64_t k) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace asepkpz
