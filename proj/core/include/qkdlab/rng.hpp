#pragma once

#include <bit>
#include <cstdint>
#include <random>

#include "qkdlab/bitstring.hpp"

namespace qkdlab {

/// 64-bit finalizer with full avalanche; also the seed-derivation mix.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

constexpr std::uint64_t kSeedGamma = 0x9e3779b97f4a7c15ULL;

/// Deterministic per-index stream derivation: documented as
/// derive(master, i) = mix64(master ^ (i+1)*gamma). Used for trial seeds and
/// per-role sub-streams; identical across platforms.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ (index + 1) * kSeedGamma);
}

/// Explicit injected randomness stream. All draws go through our own helpers
/// (std distributions are not bit-stable across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  bool bit() { return (next_u64() >> 63) & 1; }

  /// true with probability p, from one 53-bit draw.
  bool chance(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 < p;
  }

  /// Uniform in [0, bound), rejection sampled.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) return 0;
    std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(bound | 1);
    for (;;) {
      std::uint64_t v = next_u64() & mask;
      if (v < bound) return v;
    }
  }

  BitString bits(std::size_t n) {
    BitString out(n);
    std::size_t i = 0;
    while (i + 64 <= n) {
      std::uint64_t w = next_u64();
      for (std::size_t k = 0; k < 64; ++k) out.set(i + k, (w >> (63 - k)) & 1);
      i += 64;
    }
    if (i < n) {
      std::uint64_t w = next_u64();
      for (std::size_t k = 0; i + k < n; ++k) out.set(i + k, (w >> (63 - k)) & 1);
    }
    return out;
  }

  Rng fork(std::uint64_t role) { return Rng(derive_seed(next_u64(), role)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qkdlab
