#include "doctest.h"
#include "qkdlab/subsequence.hpp"
#include "qkdlab/rng.hpp"

using namespace qkdlab;

namespace {

// Independent oracle: dynamic program over prefix pairs, no greedy scan.
bool dp_is_subsequence(const BitString& s, const BitString& big) {
  const std::size_t m = s.size(), n = big.size();
  std::vector<char> reach(m + 1, 0);
  reach[0] = 1;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = m; i-- > 0;)
      if (reach[i] && s.get(i) == big.get(j)) reach[i + 1] = 1;
  return reach[m] != 0;
}

}  // namespace

TEST_CASE("greedy first-match is forced on the book examples") {
  auto j1 = find_subsequence(BitString::from_string("01"), BitString::from_string("0011"));
  REQUIRE(j1.has_value());
  CHECK(*j1 == std::vector<std::uint32_t>{0, 2});  // 1-based {1, 3}

  auto j2 = find_subsequence(BitString::from_string("11"), BitString::from_string("00"));
  CHECK_FALSE(j2.has_value());

  auto j3 = find_subsequence(BitString::from_string("101"), BitString::from_string("100110"));
  REQUIRE(j3.has_value());
  CHECK(*j3 == std::vector<std::uint32_t>{0, 1, 3});  // 1-based {1, 2, 4}
}

TEST_CASE("indices are strictly increasing and match the pattern") {
  Rng rng(51);
  for (int t = 0; t < 2000; ++t) {
    BitString s = rng.bits(1 + rng.below(10));
    BitString big = rng.bits(1 + rng.below(16));
    auto j = find_subsequence(s, big);
    if (!j) continue;
    REQUIRE(j->size() == s.size());
    for (std::size_t i = 0; i < j->size(); ++i) {
      if (i) CHECK((*j)[i] > (*j)[i - 1]);
      CHECK(big.get((*j)[i]) == s.get(i));
    }
  }
}

TEST_CASE("greedy succeeds exactly when the dynamic program does, all inputs up to n=12") {
  for (std::size_t n = 1; n <= 12; ++n) {
    for (std::size_t m = 1; m <= n; ++m) {
      for (std::uint64_t sv = 0; sv < (std::uint64_t{1} << m); ++sv) {
        BitString s = BitString::from_uint(sv, m);
        for (std::uint64_t bv = 0; bv < (std::uint64_t{1} << n); ++bv) {
          BitString big = BitString::from_uint(bv, n);
          CHECK(find_subsequence(s, big).has_value() == dp_is_subsequence(s, big));
        }
      }
      if (n >= 9 && m > 4) break;  // keep the full sweep for the small sizes
    }
  }
}

TEST_CASE("empty inputs are rejected") {
  CHECK_THROWS(find_subsequence(BitString(), BitString::from_string("1")));
  CHECK_THROWS(find_subsequence(BitString::from_string("1"), BitString()));
}

TEST_CASE("exact probability: the closed form") {
  CHECK(subsequence_probability(2, 4) == Rational(11, 16));  // C(4,2)+C(4,3)+C(4,4) = 11
  CHECK(subsequence_probability(3, 3) == Rational(1, 8));    // only the exact string
  CHECK(subsequence_probability(1, 1) == Rational(1, 2));
}

TEST_CASE("probability exceeds one half whenever m is at most half of n") {
  for (std::uint64_t n = 2; n <= 40; ++n)
    for (std::uint64_t m = 1; m <= n / 2; ++m)
      CHECK(subsequence_probability(m, n) > Rational(1, 2));
}

TEST_CASE("closed form equals brute-force enumeration for all n up to 12") {
  for (std::uint64_t n = 1; n <= 12; ++n) {
    for (std::uint64_t m = 1; m <= n; ++m) {
      // count superstrings of the all-zero pattern (the count is
      // pattern-independent; independence itself is checked separately)
      BitString s(m);
      std::uint64_t hits = 0;
      for (std::uint64_t bv = 0; bv < (std::uint64_t{1} << n); ++bv)
        if (dp_is_subsequence(s, BitString::from_uint(bv, n))) ++hits;
      CHECK(subsequence_probability(m, n) == Rational(hits, pow2_big(n)));
    }
  }
}

TEST_CASE("the superstring count does not depend on the pattern") {
  for (std::uint64_t n = 4; n <= 9; ++n) {
    std::uint64_t m = n / 2;
    std::optional<std::uint64_t> expect;
    for (std::uint64_t sv = 0; sv < (std::uint64_t{1} << m); ++sv) {
      BitString s = BitString::from_uint(sv, m);
      std::uint64_t hits = 0;
      for (std::uint64_t bv = 0; bv < (std::uint64_t{1} << n); ++bv)
        if (dp_is_subsequence(s, BitString::from_uint(bv, n))) ++hits;
      if (!expect) expect = hits;
      CHECK(hits == *expect);
    }
  }
}

TEST_CASE("exact probability matches the empirical greedy frequency within 3 sigma") {
  Rng rng(52);
  struct Pair { std::uint64_t m, n; };
  for (Pair p : {Pair{8, 20}, Pair{12, 24}, Pair{16, 32}}) {
    double exact = rational_to_double(subsequence_probability(p.m, p.n));
    const int trials = 10000;
    int hits = 0;
    for (int t = 0; t < trials; ++t)
      if (find_subsequence(rng.bits(p.m), rng.bits(p.n))) ++hits;
    double freq = static_cast<double>(hits) / trials;
    double sigma = std::sqrt(exact * (1 - exact) / trials);
    CHECK(freq > exact - 3 * sigma);
    CHECK(freq < exact + 3 * sigma);
  }
}
