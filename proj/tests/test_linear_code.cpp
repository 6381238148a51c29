#include "doctest.h"
#include "qkdlab/linear_code.hpp"
#include "qkdlab/rng.hpp"

#include <bit>

using namespace qkdlab;

TEST_CASE("published set parameters") {
  const auto& codes = published_codes();
  REQUIRE(codes.size() == 3);
  CHECK(codes[0].syndrome_len() == 5);
  CHECK(codes[0].decode_radius() == 1);
  CHECK(codes[1].syndrome_len() == 8);
  CHECK(codes[1].decode_radius() == 2);
  CHECK(codes[2].syndrome_len() == 12);
  CHECK(codes[2].decode_radius() == 3);
  for (const auto& c : codes) CHECK(c.block_len() == 16);
  CHECK(default_code().index() == 3);
}

TEST_CASE("every error pattern within the radius has a unique syndrome") {
  // exhaustive: distinct leaders for all weight <= radius patterns
  for (const auto& code : published_codes()) {
    std::vector<int> seen(std::size_t{1} << code.syndrome_len(), -1);
    for (std::uint32_t pat = 0; pat < (1u << code.block_len()); ++pat) {
      unsigned w = static_cast<unsigned>(std::popcount(pat));
      if (w > code.decode_radius()) continue;
      std::uint16_t s = code.block_syndrome(static_cast<std::uint16_t>(pat));
      CAPTURE(code.index());
      CAPTURE(pat);
      CHECK(seen[s] == -1);
      seen[s] = static_cast<int>(pat);
      CHECK(code.leader(s) == pat);
    }
  }
}

TEST_CASE("zero error leaves the key unchanged") {
  Rng rng(31);
  for (const auto& code : published_codes()) {
    BitString key = rng.bits(160);
    CHECK(code.correct(key, code.syndrome(key)) == key);
  }
}

TEST_CASE("exhaustive single-error sweep over one block") {
  for (const auto& code : published_codes()) {
    Rng rng(32);
    BitString key = rng.bits(16);
    BitString syn = code.syndrome(key);
    for (std::size_t i = 0; i < 16; ++i) {
      BitString noisy = key;
      noisy.flip(i);
      CHECK(code.correct(noisy, syn) == key);
    }
  }
}

TEST_CASE("per-block radius recovery across a long key") {
  Rng rng(33);
  const auto& code = published_codes()[2];
  BitString key = rng.bits(160);
  BitString syn = code.syndrome(key);
  // up to 3 errors in each 16-bit block
  BitString noisy = key;
  for (std::size_t b = 0; b < 10; ++b) {
    std::size_t w = rng.below(4);
    for (std::size_t k = 0; k < w; ++k) noisy.flip(b * 16 + rng.below(16));
  }
  CHECK(code.correct(noisy, syn) == key);
}

TEST_CASE("beyond the radius the decoder silently miscorrects") {
  const auto& code = published_codes()[0];  // radius 1
  Rng rng(34);
  BitString key = rng.bits(16);
  BitString syn = code.syndrome(key);
  BitString noisy = key;
  noisy.flip(1);
  noisy.flip(7);
  noisy.flip(12);
  BitString out = code.correct(noisy, syn);
  CHECK(out != key);  // no exception, wrong codeword coset
}

TEST_CASE("syndrome linearity") {
  Rng rng(35);
  for (const auto& code : published_codes()) {
    BitString k1 = rng.bits(96), k2 = rng.bits(96);
    CHECK((code.syndrome(k1) ^ code.syndrome(k2)) == code.syndrome(k1 ^ k2));
  }
}

TEST_CASE("tail-padded blocks behave as shortened code words") {
  const auto& code = published_codes()[1];
  Rng rng(36);
  BitString key = rng.bits(21);  // one full block + 5-bit tail
  BitString syn = code.syndrome(key);
  CHECK(syn.size() == 2 * code.syndrome_len());
  BitString noisy = key;
  noisy.flip(18);
  CHECK(code.correct(noisy, syn) == key);
}

TEST_CASE("interleaver is a length-determined permutation and round-trips") {
  Rng rng(37);
  for (std::size_t len : {1, 17, 160, 1000}) {
    auto perm = ec_interleaver(len);
    auto again = ec_interleaver(len);
    CHECK(perm == again);
    std::vector<bool> seen(len, false);
    for (auto p : perm) {
      CHECK(p < len);
      CHECK(!seen[p]);
      seen[p] = true;
    }
    BitString key = rng.bits(len);
    CHECK(ec_unpermute(ec_permute(key, perm), perm) == key);
  }
}

TEST_CASE("code selection by channel estimate") {
  CHECK(select_code(0.001).index() == 1);
  CHECK(select_code(0.02).index() == 2);
  CHECK(select_code(0.08).index() == 3);
}
