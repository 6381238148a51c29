#include "doctest.h"
#include "qkdlab/gf2.hpp"

#include <cstdint>

using namespace qkdlab;

namespace {

// Independent irreducibility oracle: x^(2^n) == x mod p and
// gcd(x^(2^(n/q)) - x, p) == 1 for prime divisors q of n. Uses its own
// modular arithmetic, not Gf2Field.
std::uint64_t pmod_bits(unsigned __int128 a, unsigned __int128 m, int dm) {
  while (true) {
    int da = -1;
    for (int b = 127; b >= 0; --b)
      if ((a >> b) & 1) { da = b; break; }
    if (da < dm) break;
    a ^= m << (da - dm);
  }
  return static_cast<std::uint64_t>(a);
}

std::uint64_t modmul_bits(std::uint64_t x, std::uint64_t y, unsigned __int128 m, int dm) {
  unsigned __int128 acc = 0;
  for (int b = 63; b >= 0; --b) {
    acc <<= 1;
    if ((y >> b) & 1) acc ^= x;
    acc = pmod_bits(acc, m, dm);
  }
  return static_cast<std::uint64_t>(acc);
}

std::uint64_t modpow_x(std::uint64_t e_log2, unsigned __int128 m, int dm) {
  // x^(2^e_log2) by repeated squaring
  std::uint64_t r = pmod_bits(2, m, dm);
  for (std::uint64_t i = 0; i < e_log2; ++i) r = modmul_bits(r, r, m, dm);
  return r;
}

std::uint64_t pgcd(unsigned __int128 a, unsigned __int128 b) {
  while (b) {
    int db = -1;
    for (int x = 127; x >= 0; --x)
      if ((b >> x) & 1) { db = x; break; }
    unsigned __int128 r = pmod_bits(a, b, db);
    a = b;
    b = r;
  }
  return static_cast<std::uint64_t>(a);
}

bool irreducible(unsigned n) {
  unsigned __int128 p = (static_cast<unsigned __int128>(1) << n) ^ gf2_reduction_poly(n);
  if (modpow_x(n, p, static_cast<int>(n)) != pmod_bits(2, p, static_cast<int>(n))) return false;
  for (unsigned q = 2; q <= n; ++q) {
    if (n % q != 0) continue;
    bool prime = true;
    for (unsigned d = 2; d * d <= q; ++d)
      if (q % d == 0) prime = false;
    if (!prime) continue;
    std::uint64_t h = modpow_x(n / q, p, static_cast<int>(n)) ^ pmod_bits(2, p, static_cast<int>(n));
    if (h != 0 && pgcd(p, h) != 1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("published reduction polynomials are irreducible") {
  for (unsigned n = 1; n <= 64; ++n) {
    CAPTURE(n);
    CHECK(irreducible(n));
  }
}

TEST_CASE("field axioms at small width by brute force") {
  Gf2Field f(4);
  // nonzero elements form a group under multiplication: cancellation
  for (std::uint64_t a = 1; a < 16; ++a) {
    bool seen[16] = {};
    for (std::uint64_t b = 0; b < 16; ++b) {
      std::uint64_t p = f.mul(a, b);
      CHECK(!seen[p]);
      seen[p] = true;
    }
  }
  // distributivity spot sweep
  for (std::uint64_t a = 0; a < 16; ++a)
    for (std::uint64_t b = 0; b < 16; ++b)
      for (std::uint64_t c = 0; c < 16; ++c)
        CHECK(f.mul(a, b ^ c) == (f.mul(a, b) ^ f.mul(a, c)));
}

TEST_CASE("aes field anchor values") {
  Gf2Field f(8);  // x^8 + x^4 + x^3 + x + 1, the familiar byte field
  CHECK(f.mul(0x57, 0x83) == 0xc1);
  CHECK(f.mul(0x02, 0x80) == 0x1b);
  CHECK(f.pow(0x03, 255) == 0x01);  // generator order divides 255
}

TEST_CASE("width-64 multiplication agrees with schoolbook reduction") {
  Gf2Field f(64);
  std::uint64_t a = 0x0123456789abcdefULL, b = 0xfedcba9876543210ULL;
  // schoolbook: shift-xor against x^64 + low
  auto mul_ref = [](std::uint64_t x, std::uint64_t y) {
    std::uint64_t low = gf2_reduction_poly(64);
    std::uint64_t acc = 0;
    for (int i = 63; i >= 0; --i) {
      bool carry = acc >> 63;
      acc <<= 1;
      if (carry) acc ^= low;
      if ((y >> i) & 1) acc ^= x;
    }
    return acc;
  };
  CHECK(f.mul(a, b) == mul_ref(a, b));
  CHECK(f.mul(b, a) == f.mul(a, b));
}
