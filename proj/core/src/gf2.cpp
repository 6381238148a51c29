#include "qkdlab/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace qkdlab {

namespace {

// Low part of the lexicographically smallest irreducible polynomial of each
// degree; index = width, entry 0 unused.
constexpr std::uint64_t kReductionLow[65] = {
    0,
    0x1,  0x3,  0x3,  0x3,  0x5,  0x3,  0x3,  0x1b, 0x3,  0x9,
    0x5,  0x9,  0x1b, 0x21, 0x3,  0x2b, 0x9,  0x9,  0x27, 0x9,
    0x5,  0x3,  0x21, 0x1b, 0x9,  0x1b, 0x27, 0x3,  0x5,  0x3,
    0x9,  0x8d, 0x4b, 0x1b, 0x5,  0x35, 0x3f, 0x63, 0x11, 0x39,
    0x9,  0x27, 0x59, 0x21, 0x1b, 0x3,  0x21, 0x2d, 0x71, 0x1d,
    0x4b, 0x9,  0x47, 0x7d, 0x47, 0x95, 0x11, 0x63, 0x7b, 0x3,
    0x27, 0x69, 0x3,  0x1b,
};

}  // namespace

std::uint64_t gf2_reduction_poly(unsigned width) {
  if (width < 1 || width > 64) throw std::invalid_argument("field width must be in [1,64]");
  return kReductionLow[width];
}

Clmul128 clmul64(std::uint64_t a, std::uint64_t b) {
  Clmul128 r{0, 0};
  while (b) {
    unsigned i = static_cast<unsigned>(std::countr_zero(b));
    b &= b - 1;
    r.lo ^= a << i;
    if (i) r.hi ^= a >> (64 - i);
  }
  return r;
}

Gf2Field::Gf2Field(unsigned width)
    : width_(width),
      low_poly_(gf2_reduction_poly(width)),
      mask_(width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1) {}

std::uint64_t Gf2Field::mul(std::uint64_t a, std::uint64_t b) const {
  return reduce(clmul64(a & mask_, b & mask_));
}

std::uint64_t Gf2Field::pow(std::uint64_t a, std::uint64_t e) const {
  std::uint64_t result = 1, base = a & mask_;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

std::uint64_t Gf2Field::reduce(Clmul128 v) const {
  // Fold bits at positions >= width back down with x^width = low_poly_.
  // Each fold only reintroduces bits strictly below the folded position.
  int top = v.hi ? 127 - std::countl_zero(v.hi)
                 : (v.lo ? 63 - std::countl_zero(v.lo) : -1);
  for (int bit = top; bit >= static_cast<int>(width_); --bit) {
    bool set = bit >= 64 ? (v.hi >> (bit - 64)) & 1 : (v.lo >> bit) & 1;
    if (!set) continue;
    if (bit >= 64) v.hi ^= std::uint64_t{1} << (bit - 64);
    else v.lo ^= std::uint64_t{1} << bit;
    unsigned shift = static_cast<unsigned>(bit) - width_;
    // low_poly_ << shift spans at most [shift, shift+63]
    if (shift < 64) {
      v.lo ^= low_poly_ << shift;
      if (shift) v.hi ^= low_poly_ >> (64 - shift);
    } else {
      v.hi ^= low_poly_ << (shift - 64);
    }
  }
  return v.lo & mask_;
}

}  // namespace qkdlab
