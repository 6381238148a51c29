#include "doctest.h"
#include "qkdlab/family_verify.hpp"

using namespace qkdlab;

TEST_CASE("all functions {0,1}^2 -> {0,1} form a universal family with epsilon 1/2") {
  auto fam = make_all_functions_family(4, 2);
  CHECK(fam.family_size == 16);
  auto v = verify_family(fam, FamilyKind::AU2, Rational(1, 2));
  CHECK(v.verdict);
  CHECK(v.measured_epsilon == Rational(1, 2));
}

TEST_CASE("a family containing a constant member cannot be strongly universal") {
  auto fam = make_constant_padded_family(4, 2);
  auto v = verify_family(fam, FamilyKind::SU2, Rational(1, 2));
  CHECK_FALSE(v.verdict);
  CHECK_FALSE(v.condition_a_exact);
  // the witness names the violated (m, t) cell
  CHECK(v.worst_m1 == v.worst_m2);
}

TEST_CASE("truncated affine family measures as strongly universal") {
  auto fam = make_su2_affine_family(4, 2);
  auto v = verify_family(fam, FamilyKind::ASU2, Rational(1, 4));
  CHECK(v.verdict);
  CHECK(v.condition_a_exact);
  CHECK(v.measured_epsilon == Rational(1, 4));
  CHECK(v.is_su2);
}

TEST_CASE("enumeration guard") {
  EnumerableFamily fam;
  fam.domain_size = std::uint64_t{1} << 20;
  fam.family_size = std::uint64_t{1} << 20;
  fam.range_size = 2;
  fam.eval = [](std::uint64_t, std::uint64_t) { return std::uint64_t{0}; };
  CHECK_THROWS_AS(verify_family(fam, FamilyKind::AU2, Rational(1, 2)), EnumerationGuardExceeded);
}

TEST_CASE("composition identity: all functions composed with affine maps") {
  // |M|=4, |Z|=2, |T|=2: F = all 16 functions, H = the 4 affine maps
  auto f = make_all_functions_family(4, 2);
  auto h = make_su2_affine_family(1, 1);
  auto rep = verify_composition_theorem(f, h, Rational(1, 2));
  CHECK(rep.h_is_su2);
  CHECK(rep.g_condition_a_exact);
  CHECK(rep.epsilon_prime_f == Rational(1, 2));
  CHECK(rep.epsilon_g == Rational(3, 4));  // (1/2)(1/2) + 1/2
  CHECK(rep.identity_holds);
  CHECK(rep.forward_holds);
}

TEST_CASE("composition identity holds exactly on more size triples") {
  // |M|=8, |Z|=4, |T|=2 (all functions would be 4^8; use the polynomial family)
  Au2FamilySpec spec{2, 3};
  std::vector<BitString> msgs;
  for (std::size_t len = 0; len <= spec.capacity_bits(); ++len)
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v)
      msgs.push_back(BitString::from_uint(v, len));
  auto f = make_poly_family(spec, msgs);
  auto h = make_su2_affine_family(2, 1);
  auto rep = verify_composition_theorem(f, h, Rational(spec.max_blocks - 1, pow2_big(spec.z_bits)));
  CHECK(rep.h_is_su2);
  CHECK(rep.identity_holds);

  // |M|=4, |Z|=4, |T|=4: the affine family composed over the identity-ish F
  auto f2 = make_all_functions_family(3, 4);
  auto h2 = make_su2_affine_family(2, 2);
  auto rep2 = verify_composition_theorem(f2, h2, Rational(1, 4));
  CHECK(rep2.identity_holds);
}

TEST_CASE("both directions of the equivalence") {
  // forward: F universal at 1/2 -> G almost-strongly-universal at the formula
  auto f = make_all_functions_family(4, 2);
  auto h = make_su2_affine_family(1, 1);
  auto rep = verify_composition_theorem(f, h, Rational(1, 2));
  CHECK(rep.forward_holds);
  auto g_claim = rep.formula_epsilon;
  CHECK(g_claim == Rational(3, 4));

  // reverse: a family with a pair colliding everywhere is not universal at
  // 1/2, and the composed family provably exceeds the formula at that claim
  EnumerableFamily bad = f;
  bad.eval = [inner = f.eval](std::uint64_t hh, std::uint64_t m) {
    if (m == 1) m = 0;  // messages 0 and 1 collide under every member
    return inner(hh, m);
  };
  auto rep_bad = verify_composition_theorem(bad, h, Rational(1, 2));
  CHECK(rep_bad.epsilon_prime_f == Rational(1));
  CHECK(rep_bad.epsilon_g == Rational(1));
  CHECK(rep_bad.epsilon_g > rep_bad.formula_at_claimed);
  CHECK(rep_bad.reverse_witnessed);
  // epsilon' = 1 plugs into the formula as epsilon = 1
  CHECK(rep_bad.formula_epsilon == Rational(1));
}

TEST_CASE("epsilon' = 1/|T| gives epsilon = 2/|T| - 1/|T|^2") {
  // the sharpest composition target: plug the claim into the formula
  for (std::uint64_t T : {2ull, 4ull, 8ull, 16ull}) {
    Rational ep(1, BigInt(T));
    Rational invT(1, BigInt(T));
    Rational eps = ep * (Rational(1) - invT) + invT;
    CHECK(eps == Rational(2, BigInt(T)) - Rational(1, BigInt(T) * T));
  }
}
