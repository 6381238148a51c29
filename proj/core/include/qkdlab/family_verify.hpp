#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "qkdlab/rational.hpp"
#include "qkdlab/universal_hash.hpp"

namespace qkdlab {

struct EnumerationGuardExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// |M| * |H| evaluations at most; keeps brute-force verification desk-scale.
constexpr std::uint64_t kEnumerationGuard = std::uint64_t{1} << 28;

/// A finite hash family presented for exhaustive verification.
/// eval(h, m) must return values below range_size.
struct EnumerableFamily {
  std::uint64_t domain_size = 0;
  std::uint64_t family_size = 0;
  std::uint64_t range_size = 0;
  std::function<std::uint64_t(std::uint64_t h, std::uint64_t m)> eval;
};

enum class FamilyKind { AU2, SU2, ASU2 };

struct FamilyVerdict {
  Rational measured_epsilon;   // exact, from full enumeration
  Rational bound_epsilon;      // the claim being checked
  bool condition_a_exact = false;  // |{h: h(m)=t}| == |H|/|T| everywhere
  bool is_au2 = false;
  bool is_su2 = false;
  bool is_asu2 = false;
  bool verdict = false;        // the claim under `kind` holds
  // Witness attaining measured_epsilon (or violating condition (a), in which
  // case m1 == m2 and t1 == t2).
  std::uint64_t worst_m1 = 0, worst_m2 = 0, worst_t1 = 0, worst_t2 = 0;
};

/// Exhaustively measures the family's universality. For AU2 the measured
/// epsilon is the worst pair-collision fraction; for SU2/ASU2 it is the worst
/// conditional fraction of Definition-style condition (b), with condition (a)
/// checked for exact |H|/|T| counts.
FamilyVerdict verify_family(const EnumerableFamily& family, FamilyKind kind,
                            const Rational& claimed_epsilon);

struct CompositionReport {
  Rational epsilon_prime_f;   // measured AU2 epsilon of F
  Rational epsilon_g;         // measured ASU2 epsilon of G = H o F
  Rational formula_epsilon;   // eps'(1 - 1/|T|) + 1/|T|
  bool h_is_su2 = false;
  bool g_condition_a_exact = false;
  bool identity_holds = false;        // epsilon_g == formula_epsilon exactly
  bool forward_holds = false;         // F eps'-AU2  =>  G ASU2 at formula
  bool reverse_witnessed = false;     // claimed eps' < measured  =>  G exceeds formula(claimed)
  Rational formula_at_claimed;        // formula applied to the claimed eps'
};

/// Composes G = H o F elementwise and measures everything exactly. H must be
/// SU2 (prechecked; throws on failure). claimed_epsilon_prime drives the "only
/// if" direction: when F is not AU2 at that claim, the report shows G's
/// measured epsilon exceeding the formula applied to the claim.
CompositionReport verify_composition_theorem(const EnumerableFamily& f,
                                             const EnumerableFamily& h,
                                             const Rational& claimed_epsilon_prime);

// Canonical enumerable instances.
EnumerableFamily make_su2_affine_family(unsigned z_bits, unsigned t_bits);
EnumerableFamily make_all_functions_family(std::uint64_t domain_size, std::uint64_t range_size);
EnumerableFamily make_poly_family(const Au2FamilySpec& spec, std::vector<BitString> messages);
/// All functions plus a family member that is constant everywhere.
EnumerableFamily make_constant_padded_family(std::uint64_t domain_size, std::uint64_t range_size);

}  // namespace qkdlab
