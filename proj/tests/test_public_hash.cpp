#include "doctest.h"
#include "qkdlab/public_hash.hpp"
#include "qkdlab/rng.hpp"

using namespace qkdlab;

TEST_CASE("determinism: equal spec and message give equal digests") {
  PublicHashSpec spec{16, kDefaultMixerSeed};
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    BitString m = rng.bits(1 + static_cast<std::size_t>(rng.below(200)));
    CHECK(public_hash_f(spec, m) == public_hash_f(spec, m));
  }
}

TEST_CASE("fixed-point regression anchor: empty message at z=8") {
  PublicHashSpec spec{8, kDefaultMixerSeed};
  CHECK(public_hash_uint(spec, BitString()) == 0x8c);
}

TEST_CASE("padding is not free: strings differing only in tail zeros differ") {
  PublicHashSpec spec{32, kDefaultMixerSeed};
  BitString a = BitString::from_string("1011");
  BitString b = BitString::from_string("10110000");
  CHECK(a.bytes() == b.bytes());
  CHECK(public_hash_uint(spec, a) != public_hash_uint(spec, b));
}

TEST_CASE("avalanche: each output bit flips with frequency 0.5 +- 0.05") {
  // 10^4 bit-flip trials over random 64-bit messages
  for (unsigned z : {8u, 16u}) {
    PublicHashSpec spec{z, kDefaultMixerSeed};
    Rng rng(1234 + z);
    const int trials = 10000;
    std::vector<int> flips(z, 0);
    for (int t = 0; t < trials; ++t) {
      BitString m = rng.bits(64);
      std::uint64_t d0 = public_hash_uint(spec, m);
      std::size_t pos = rng.below(64);
      m.flip(pos);
      std::uint64_t d1 = public_hash_uint(spec, m);
      std::uint64_t x = d0 ^ d1;
      for (unsigned b = 0; b < z; ++b)
        if ((x >> b) & 1) ++flips[b];
    }
    for (unsigned b = 0; b < z; ++b) {
      double freq = static_cast<double>(flips[b]) / trials;
      CAPTURE(z);
      CAPTURE(b);
      CHECK(freq > 0.45);
      CHECK(freq < 0.55);
    }
  }
}

TEST_CASE("different seeds give different maps") {
  PublicHashSpec a{16, kDefaultMixerSeed};
  PublicHashSpec b{16, kDefaultMixerSeed + 1};
  BitString m = BitString::from_string("110010111010");
  CHECK(public_hash_uint(a, m) != public_hash_uint(b, m));
}
