#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "qkdlab/bitstring.hpp"
#include "qkdlab/gf2.hpp"

namespace qkdlab {

/// Authentication tag of exactly t_bits.
struct Tag {
  BitString value;

  unsigned t_bits() const { return static_cast<unsigned>(value.size()); }
  std::uint64_t as_uint() const { return value.read_uint(0, value.size()); }
  bool operator==(const Tag&) const = default;
};

/// Key of the strongly-universal outer family: tag = low-t truncation of
/// a * digest over GF(2^z_bits), xor b. Key length = z_bits + t_bits;
/// single-use is enforced by the KeyLedger that issues it.
struct Su2Key {
  unsigned z_bits = 16;
  unsigned t_bits = 16;
  std::uint64_t a = 0;  // field element of GF(2^z_bits)
  std::uint64_t b = 0;  // t_bits-wide mask
};

Su2Key su2_key_from_bits(unsigned z_bits, unsigned t_bits, const BitString& material);

/// Outer hash: truncate_{t}(a * digest) xor b. Over all (a, b) this family is
/// strongly universal; verified exhaustively at small widths in the tests.
Tag su2_eval(const Su2Key& key, const BitString& digest);
std::uint64_t su2_eval_uint(const Su2Key& key, std::uint64_t digest);

/// Polynomial-evaluation almost-universal family over GF(2^z_bits).
/// A member f_S hashes the padded block sequence b_1..b_d to
/// sum_{i=1..d} b_i * S^i. Collision fraction over a full point sweep is at
/// most (max_blocks - 1) / 2^z_bits for messages within capacity.
struct Au2FamilySpec {
  unsigned z_bits = 32;
  unsigned max_blocks = 8;  // padded block budget, prefix included

  /// Largest message length in bits accepted by pad_blocks.
  std::size_t capacity_bits() const;
  double epsilon_prime() const {
    return static_cast<double>(max_blocks - 1) / std::pow(2.0, z_bits);
  }
  bool operator==(const Au2FamilySpec&) const = default;
};

/// Raw polynomial core: sum_{i=1..d} blocks[i-1] * S^i.
std::uint64_t poly_eval_blocks(const Gf2Field& field, std::uint64_t point,
                               std::span<const std::uint64_t> blocks);

/// Injective padding: a length-prefix block followed by the message split
/// into z_bits blocks, zero-padded at the tail. Requires length < 2^z_bits
/// and the padded sequence to fit max_blocks.
std::vector<std::uint64_t> pad_blocks(const Au2FamilySpec& family, const BitString& message);

/// f_S(message) over the padded block sequence.
BitString poly_au2_eval(const Au2FamilySpec& family, std::uint64_t point, const BitString& message);
std::uint64_t poly_au2_eval_uint(const Au2FamilySpec& family, std::uint64_t point,
                                 const BitString& message);

}  // namespace qkdlab
