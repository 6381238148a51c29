#pragma once

#include <cstdint>

namespace qkdlab {

/// The published reduction polynomial for GF(2^width): the full polynomial is
/// x^width + (low part). Low parts are the lexicographically smallest choices
/// making the polynomial irreducible; the table is mirrored in
/// docs/hash_parameters_v1.txt.
std::uint64_t gf2_reduction_poly(unsigned width);

/// Carryless (polynomial) product of two 64-bit operands, 128-bit result.
struct Clmul128 {
  std::uint64_t lo;
  std::uint64_t hi;
};
Clmul128 clmul64(std::uint64_t a, std::uint64_t b);

/// GF(2^width) arithmetic, 1 <= width <= 64. Elements are integers below
/// 2^width in the polynomial basis.
class Gf2Field {
 public:
  explicit Gf2Field(unsigned width);

  unsigned width() const { return width_; }
  std::uint64_t order_mask() const { return mask_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return a ^ b; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;

 private:
  std::uint64_t reduce(Clmul128 v) const;

  unsigned width_;
  std::uint64_t low_poly_;
  std::uint64_t mask_;
};

}  // namespace qkdlab
