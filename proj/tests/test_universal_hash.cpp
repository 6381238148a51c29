#include "doctest.h"
#include "qkdlab/universal_hash.hpp"
#include "qkdlab/rng.hpp"

#include <map>

using namespace qkdlab;

TEST_CASE("su2: zero multiplier reduces the tag to the mask part") {
  Su2Key key{8, 4, 0, 0xb};
  for (std::uint64_t d = 0; d < 256; d += 17)
    CHECK(su2_eval_uint(key, d) == 0xb);
}

TEST_CASE("su2 family at z=4 t=2 is strongly universal by direct enumeration") {
  // condition (a): every (digest, tag) pair hit by exactly |H|/|T| = 16 keys
  for (std::uint64_t z1 = 0; z1 < 16; ++z1) {
    for (std::uint64_t t1 = 0; t1 < 4; ++t1) {
      int count = 0;
      for (std::uint64_t a = 0; a < 16; ++a)
        for (std::uint64_t b = 0; b < 4; ++b)
          if (su2_eval_uint(Su2Key{4, 2, a, b}, z1) == t1) ++count;
      CHECK(count == 16);
    }
  }
  // condition (b): conditional fraction exactly 1/4 for every z1 != z2
  for (std::uint64_t z1 = 0; z1 < 16; ++z1)
    for (std::uint64_t z2 = 0; z2 < 16; ++z2) {
      if (z1 == z2) continue;
      for (std::uint64_t t1 = 0; t1 < 4; ++t1)
        for (std::uint64_t t2 = 0; t2 < 4; ++t2) {
          int joint = 0;
          for (std::uint64_t a = 0; a < 16; ++a)
            for (std::uint64_t b = 0; b < 4; ++b) {
              Su2Key k{4, 2, a, b};
              if (su2_eval_uint(k, z1) == t1 && su2_eval_uint(k, z2) == t2) ++joint;
            }
          CHECK(joint == 4);  // 16 * (1/4)
        }
    }
}

TEST_CASE("su2 key material layout") {
  BitString material = BitString::from_string("10110011" "01");
  Su2Key k = su2_key_from_bits(8, 2, material);
  CHECK(k.a == 0xb3);
  CHECK(k.b == 0x1);
  CHECK_THROWS(su2_key_from_bits(8, 4, material));
}

TEST_CASE("polynomial core: evaluation at zero and single blocks") {
  Gf2Field f(4);
  std::vector<std::uint64_t> one_block{0xb};
  CHECK(poly_eval_blocks(f, 0, one_block) == 0);
  for (std::uint64_t s = 0; s < 16; ++s)
    CHECK(poly_eval_blocks(f, s, one_block) == f.mul(0xb, s));  // degree-1 polynomial
  std::vector<std::uint64_t> two{0x3, 0x7};
  for (std::uint64_t s = 0; s < 16; ++s)
    CHECK(poly_eval_blocks(f, s, two) == (f.mul(0x3, s) ^ f.mul(0x7, f.mul(s, s))));
}

TEST_CASE("padded family: evaluation at zero is zero for every message") {
  Au2FamilySpec fam{4, 3};
  Rng rng(5);
  for (int i = 0; i < 30; ++i) {
    BitString m = rng.bits(1 + rng.below(fam.capacity_bits()));
    CHECK(poly_au2_eval_uint(fam, 0, m) == 0);
  }
}

TEST_CASE("padding injectivity: distinct messages give distinct block sequences") {
  Au2FamilySpec fam{4, 4};
  std::map<std::vector<std::uint64_t>, BitString> seen;
  for (std::size_t len = 0; len <= fam.capacity_bits(); ++len) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      BitString m = BitString::from_uint(v, len);
      auto blocks = pad_blocks(fam, m);
      auto [it, fresh] = seen.emplace(blocks, m);
      CAPTURE(len);
      CHECK(fresh);
    }
  }
}

TEST_CASE("collision fraction over full-capacity message pairs stays within epsilon'") {
  // z=4, max_blocks=3: all messages whose padded form occupies two blocks
  Au2FamilySpec fam{4, 3};
  std::vector<BitString> msgs;
  for (std::size_t len = 1; len <= 4; ++len)
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v)
      msgs.push_back(BitString::from_uint(v, len));
  int worst = 0;
  for (std::size_t i = 0; i < msgs.size(); ++i)
    for (std::size_t j = i + 1; j < msgs.size(); ++j) {
      int c = 0;
      for (std::uint64_t s = 0; s < 16; ++s)
        if (poly_au2_eval_uint(fam, s, msgs[i]) == poly_au2_eval_uint(fam, s, msgs[j])) ++c;
      worst = std::max(worst, c);
    }
  CHECK(worst <= 2);  // (max_blocks - 1) / 2^z = 2/16
}

TEST_CASE("capacity errors") {
  Au2FamilySpec fam{4, 3};
  CHECK(fam.capacity_bits() == 4);
  CHECK_THROWS(pad_blocks(fam, BitString(5)));
}
