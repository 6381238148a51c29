#pragma once

#include <cstdint>
#include <span>

#include "qkdlab/bitstring.hpp"
#include "qkdlab/rng.hpp"

namespace qkdlab {

/// The default public constant seeding the mixer; published together with
/// the field reduction polynomials in docs/hash_parameters_v1.txt.
constexpr std::uint64_t kDefaultMixerSeed = 0x5851f42d4c957f2dULL;

/// The publicly known inner hash: a block-iterated 64-bit multiply-xor-shift
/// mixer truncated to z_bits. Deterministic and identical for equal specs;
/// its random-oracle quality is asserted statistically (avalanche tests).
struct PublicHashSpec {
  unsigned z_bits = 16;                        // output width, log2|Z|, 1..64
  std::uint64_t mixer_seed = kDefaultMixerSeed;

  bool operator==(const PublicHashSpec&) const = default;
};

/// Incremental mixer state over whole 64-bit blocks. Bytes are consumed
/// MSB-first into big-endian blocks, zero-padded at the tail; the bit length
/// is folded in at finalization so strings differing only in padding differ.
class MixerState {
 public:
  explicit MixerState(std::uint64_t seed) : state_(mix64(seed ^ kSeedGamma)) {}

  void absorb_block(std::uint64_t block) { state_ = mix64(state_ ^ block); }

  std::uint64_t finalize(std::uint64_t total_bits) const {
    return mix64(mix64(state_ ^ total_bits) ^ kSeedGamma);
  }

  std::uint64_t raw() const { return state_; }
  static MixerState from_raw(std::uint64_t s) { MixerState m(0); m.state_ = s; return m; }

 private:
  std::uint64_t state_;
};

std::uint64_t packed_block(std::span<const std::uint8_t> bytes, std::size_t block_index);

/// f over raw bytes carrying `nbits` of payload. Returns the low z_bits of
/// the final mixer word.
std::uint64_t public_hash_value(const PublicHashSpec& spec,
                                std::span<const std::uint8_t> bytes,
                                std::size_t nbits);

/// f as specified: digest is a BitString of exactly z_bits (value MSB first).
BitString public_hash_f(const PublicHashSpec& spec, const BitString& message);

/// Digest as an integer below 2^z_bits. Same value as public_hash_f.
std::uint64_t public_hash_uint(const PublicHashSpec& spec, const BitString& message);

}  // namespace qkdlab
