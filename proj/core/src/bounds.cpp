#include "qkdlab/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace qkdlab {

namespace {

double one_minus_exp_neg(const Rational& exponent) {
  // 1 - exp(-x) saturates to 1 long before double overflow territory.
  if (exponent > Rational(750)) return 1.0;
  return -std::expm1(-rational_to_double(exponent));
}

}  // namespace

BallBound collision_ball_success_bound(std::uint64_t ell, std::uint64_t w, unsigned z_bits) {
  if (w > ell) throw std::invalid_argument("ball radius exceeds message length");
  BigInt z = pow2_big(z_bits);
  BigInt ball = 0;
  for (std::uint64_t k = 0; k <= w; ++k) ball += binomial_big(ell, k);
  BallBound b;
  b.ball_size = ball;
  b.loose_exponent = Rational(binomial_big(ell, w), z);
  b.full_ball_exponent = Rational(ball, z);
  b.loose_bound = one_minus_exp_neg(b.loose_exponent);
  b.full_ball_bound = one_minus_exp_neg(b.full_ball_exponent);
  return b;
}

KeyConsumption key_consumption(const AuthScheme& scheme, const BigInt& message_bits) {
  KeyConsumption kc;
  kc.bits_per_tag = tag_key_cost(scheme);
  if (scheme.variant == AuthVariant::ItsComposed) {
    // message_bits < (2^z / 2^t + 1) * z with polynomial hashing, |F| = |Z|
    unsigned z = scheme.au2.z_bits, t = scheme.t_bits;
    BigInt limit = (pow2_big(z) / pow2_big(t) + 1) * z;
    kc.max_message_bits = limit - 1;
    if (message_bits > *kc.max_message_bits)
      throw std::invalid_argument("message_bits exceeds max_message_bits for the composed scheme");
  }
  return kc;
}

ComposedSizing min_composed_key_bits(const BigInt& message_bits, unsigned t_bits) {
  for (unsigned z = t_bits; z <= 4096; ++z) {
    BigInt limit = (pow2_big(z) / pow2_big(t_bits) + 1) * z;
    if (message_bits < limit) {
      ComposedSizing s;
      s.z_bits = z;
      s.t_bits = t_bits;
      s.total_key_bits = 2 * static_cast<std::size_t>(z) + t_bits;
      return s;
    }
  }
  throw std::invalid_argument("no field width up to 4096 bits can cover the message");
}

}  // namespace qkdlab
