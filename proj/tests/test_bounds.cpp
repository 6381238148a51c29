#include "doctest.h"
#include "qkdlab/bounds.hpp"
#include "qkdlab/public_hash.hpp"
#include "qkdlab/rng.hpp"

#include <cmath>

using namespace qkdlab;

TEST_CASE("ball bound at headline parameters reaches 99.9%") {
  auto b = collision_ball_success_bound(1 << 12, 32, 256);
  CHECK(b.loose_bound >= 0.999);
  CHECK(b.full_ball_bound >= b.loose_bound);
}

TEST_CASE("ball equal to the whole digest space forces exponent one") {
  auto b = collision_ball_success_bound(8, 8, 8);
  CHECK(b.ball_size == 256);
  CHECK(b.full_ball_exponent == Rational(1));
  CHECK(b.full_ball_bound == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("small ball value and its Monte Carlo cross-check") {
  auto b = collision_ball_success_bound(16, 2, 8);
  CHECK(b.ball_size == 137);  // 1 + 16 + 120
  CHECK(b.full_ball_bound == doctest::Approx(1.0 - std::exp(-137.0 / 256.0)).epsilon(1e-12));
  CHECK(b.full_ball_bound == doctest::Approx(0.4143).epsilon(0.001));

  // random-oracle estimate with the mixer standing in for f
  PublicHashSpec spec{8, kDefaultMixerSeed};
  Rng rng(4242);
  const int trials = 3000;
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    // a fresh oracle instance per trial: vary the seed
    PublicHashSpec s2{8, rng.next_u64()};
    BitString base = rng.bits(16);
    std::uint64_t target = rng.below(256);
    bool found = false;
    // enumerate the radius-2 ball
    if (public_hash_uint(s2, base) == target) found = true;
    for (std::size_t i = 0; i < 16 && !found; ++i) {
      BitString m = base;
      m.flip(i);
      if (public_hash_uint(s2, m) == target) found = true;
      for (std::size_t j = i + 1; j < 16 && !found; ++j) {
        m.flip(j);
        if (public_hash_uint(s2, m) == target) found = true;
        m.flip(j);
      }
    }
    if (found) ++hits;
  }
  double freq = static_cast<double>(hits) / trials;
  double sigma = std::sqrt(0.4143 * (1 - 0.4143) / trials);
  CHECK(freq > 0.4143 - 4 * sigma);
  CHECK(freq < 0.4143 + 4 * sigma);
}

TEST_CASE("monotonicity of the ball bound") {
  auto base = collision_ball_success_bound(64, 3, 16);
  CHECK(collision_ball_success_bound(64, 4, 16).full_ball_exponent >= base.full_ball_exponent);
  CHECK(collision_ball_success_bound(96, 3, 16).full_ball_exponent >= base.full_ball_exponent);
  CHECK(collision_ball_success_bound(64, 3, 20).full_ball_exponent <= base.full_ball_exponent);
}

TEST_CASE("ball radius beyond the message length is rejected") {
  CHECK_THROWS(collision_ball_success_bound(8, 9, 8));
}

TEST_CASE("composed scheme key cost: the 576-bit configuration") {
  AuthScheme its;
  its.variant = AuthVariant::ItsComposed;
  its.au2 = Au2FamilySpec{256, 8};
  its.t_bits = 64;
  auto kc = key_consumption(its, BigInt(1) << 100);
  CHECK(kc.bits_per_tag == 576);
  CHECK(kc.max_message_bits.has_value());
  // ceiling: (2^256/2^64 + 1) * 256
  CHECK(*kc.max_message_bits == (pow2_big(192) + 1) * 256 - 1);
  CHECK_THROWS(key_consumption(its, (pow2_big(192) + 1) * 256));
}

TEST_CASE("decimal message-size ladder matches the published key costs") {
  struct Row { BigInt bits; std::size_t key; };
  BigInt p10 = 1;
  for (int i = 0; i < 12; ++i) p10 *= 10;
  std::vector<Row> rows;
  rows.push_back({p10, 260});                    // terabit
  rows.push_back({p10 * 1000, 280});             // petabit
  rows.push_back({p10 * 1000000, 298});          // exabit
  rows.push_back({p10 * 1000000000, 318});       // zettabit
  rows.push_back({p10 * 1000000000000LL, 338});  // yottabit
  for (const auto& row : rows) {
    auto sizing = min_composed_key_bits(row.bits, 64);
    CHECK(sizing.total_key_bits == row.key);
  }
}

TEST_CASE("degenerate widths: z equal to t gives 3t per tag") {
  AuthScheme its;
  its.variant = AuthVariant::ItsComposed;
  its.t_bits = 24;
  its.au2 = Au2FamilySpec{24, 8};
  auto kc = key_consumption(its, BigInt(8));
  CHECK(kc.bits_per_tag == 3 * 24);
}

TEST_CASE("plain two-step costs z + t per tag with no length ceiling") {
  AuthScheme plain;
  plain.variant = AuthVariant::TwoStep;
  plain.public_hash.z_bits = 12;
  plain.t_bits = 16;
  auto kc = key_consumption(plain, pow2_big(999));
  CHECK(kc.bits_per_tag == 28);
  CHECK_FALSE(kc.max_message_bits.has_value());
}
