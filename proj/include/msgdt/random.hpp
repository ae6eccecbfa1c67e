#pragma once

// Seeded randomness with transforms that do not depend on the standard
// library's distribution implementations.
//
// Engine: std::mt19937_64.
// uniform(): top 53 bits of one engine draw, scaled to [0, 1).
// normal():  Box-Muller on two uniforms; the second variate is cached.
// index(n):  Lemire's multiply-and-reject, unbiased on [0, n).
// derive_seed(): SplitMix64 finalizer over (seed, stream) for per-run streams.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace msgdt {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double normal();
  bool bernoulli(double p) { return uniform() < p; }
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// Fisher-Yates shuffle of 0..n-1.
std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng);

}  // namespace msgdt
