#pragma once

// Reproducible random variates. Every algorithm here is fixed so that a seed
// yields the same stream on every platform and release:
//
//   engine       std::mt19937_64 (fully specified by the C++ standard)
//   uniform      53 high bits of one engine word, (w >> 11) * 2^-53, in [0,1);
//                the open variant adds half an ulp: ((w >> 11) + 0.5) * 2^-53
//   normal       Marsaglia polar method, second deviate discarded
//   exponential  -log(U) / rate with U from the open variant
//   gamma(a)     Marsaglia-Tsang squeeze for a >= 1; for a < 1 the boost
//                gamma(a+1) * U^(1/a)
//   beta(a,b)    X / (X + Y), X ~ gamma(a), Y ~ gamma(b)
//
// Independent streams for parallel work are seeded with split_seed().

#include <cstdint>
#include <random>

namespace partlab {

/// SplitMix64 finaliser applied to seed + (index + 1) * 0x9E3779B97F4A7C15.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

class RngHandle {
 public:
  explicit RngHandle(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  /// Number of 64-bit words consumed so far.
  std::uint64_t position() const { return position_; }

  std::uint64_t next_u64() {
    ++position_;
    return engine_();
  }

  double uniform();
  double uniform_open();
  /// Uniform integer in [0, bound) by rejection (no modulo bias).
  std::uint64_t uniform_index(std::uint64_t bound);
  bool bernoulli(double p) { return uniform() < p; }
  double normal();
  double exponential(double rate);
  double gamma(double shape);
  double beta(double a, double b);

 private:
  std::uint64_t seed_;
  std::uint64_t position_ = 0;
  std::mt19937_64 engine_;
};

}  // namespace partlab
