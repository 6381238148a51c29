#pragma once

#include <cstdint>
#include <optional>

#include "qkdlab/auth.hpp"
#include "qkdlab/rational.hpp"

namespace qkdlab {

/// Probability that a Hamming ball around a chosen message contains at least
/// one second preimage of a z_bits-wide random-oracle digest.
struct BallBound {
  Rational loose_exponent;      // C(ell, w) / 2^z
  Rational full_ball_exponent;  // (sum_{k<=w} C(ell, k)) / 2^z
  double loose_bound;           // 1 - exp(-loose_exponent)
  double full_ball_bound;       // 1 - exp(-full_ball_exponent)
  BigInt ball_size;
};

/// Exact big-integer binomials; the exponential is evaluated in double with
/// saturation for astronomically large exponents.
BallBound collision_ball_success_bound(std::uint64_t ell, std::uint64_t w, unsigned z_bits);

/// Key-material cost of one tag and the scheme's message-length ceiling.
struct KeyConsumption {
  std::size_t bits_per_tag = 0;
  std::optional<BigInt> max_message_bits;  // absent = unlimited
};

/// Throws when message_bits exceeds the scheme's ceiling.
KeyConsumption key_consumption(const AuthScheme& scheme, const BigInt& message_bits);

/// Smallest composed-scheme cost 2z + t able to authenticate message_bits
/// (z minimized subject to message_bits < (2^(z-t) + 1) * z).
struct ComposedSizing {
  unsigned z_bits = 0;
  unsigned t_bits = 0;
  std::size_t total_key_bits = 0;
};
ComposedSizing min_composed_key_bits(const BigInt& message_bits, unsigned t_bits);

}  // namespace qkdlab
