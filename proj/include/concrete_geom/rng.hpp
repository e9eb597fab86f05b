#pragma once

#include <cstdint>
#include <random>

namespace concrete {

/// Seeded, reproducible pseudo-random stream (64-bit Mersenne Twister).
///
/// Identical seeds give identical streams on every platform: only the raw
/// engine output is consumed and conversion to doubles is done here rather
/// than through std:: distributions, whose algorithms are unspecified.
/// Not thread-safe; give each thread its own stream via derive().
class RngState {
 public:
  explicit RngState(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform on the open interval (0, 1): the endpoints are pushed in by one
  /// ulp so that log transforms stay finite.
  double uniform_open();

  /// Independent child stream for the given stream id.
  RngState derive(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer, used for seed derivation.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

}  // namespace concrete
