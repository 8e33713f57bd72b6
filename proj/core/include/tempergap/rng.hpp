#pragma once

#include <cstdint>
#include <random>

namespace tempergap {

/// Reproducible random stream identified by (seed, stream_id).
///
/// Distinct stream ids give statistically independent engines, so parallel
/// chains never share draws. A stream is single-owner: move it between
/// threads, never share it.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in {0, ..., n-1}; n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  /// True with probability p.
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace tempergap
