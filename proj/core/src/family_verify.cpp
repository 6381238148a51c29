#include "qkdlab/family_verify.hpp"

#include <algorithm>
#include <memory>

namespace qkdlab {

namespace {

void check_guard(const EnumerableFamily& fam) {
  if (fam.domain_size == 0 || fam.family_size == 0 || fam.range_size == 0)
    throw std::invalid_argument("family must be nonempty");
  if (fam.domain_size > kEnumerationGuard / fam.family_size)
    throw EnumerationGuardExceeded("|M|*|H| exceeds the 2^28 evaluation guard");
}

std::vector<std::uint32_t> value_table(const EnumerableFamily& fam) {
  std::vector<std::uint32_t> vals(fam.family_size * fam.domain_size);
  for (std::uint64_t h = 0; h < fam.family_size; ++h)
    for (std::uint64_t m = 0; m < fam.domain_size; ++m)
      vals[h * fam.domain_size + m] = static_cast<std::uint32_t>(fam.eval(h, m));
  return vals;
}

}  // namespace

FamilyVerdict verify_family(const EnumerableFamily& fam, FamilyKind kind,
                            const Rational& claimed_epsilon) {
  check_guard(fam);
  auto vals = value_table(fam);
  const std::uint64_t M = fam.domain_size, H = fam.family_size, T = fam.range_size;

  FamilyVerdict v;
  v.bound_epsilon = claimed_epsilon;

  if (kind == FamilyKind::AU2) {
    std::uint64_t worst = 0;
    for (std::uint64_t m1 = 0; m1 < M; ++m1) {
      for (std::uint64_t m2 = m1 + 1; m2 < M; ++m2) {
        std::uint64_t c = 0;
        std::uint32_t cval = 0;
        for (std::uint64_t h = 0; h < H; ++h) {
          std::uint32_t a = vals[h * M + m1], b = vals[h * M + m2];
          if (a == b) { ++c; cval = a; }
        }
        if (c > worst) {
          worst = c;
          v.worst_m1 = m1; v.worst_m2 = m2; v.worst_t1 = cval; v.worst_t2 = cval;
        }
      }
    }
    v.measured_epsilon = Rational(BigInt(worst), BigInt(H));
    v.is_au2 = v.measured_epsilon <= claimed_epsilon;
    v.verdict = v.is_au2;
    return v;
  }

  // Condition (a): every (m, t) hit by exactly |H|/|T| members.
  v.condition_a_exact = (H % T == 0);
  if (v.condition_a_exact) {
    std::vector<std::uint64_t> counts(T);
    for (std::uint64_t m = 0; m < M && v.condition_a_exact; ++m) {
      std::fill(counts.begin(), counts.end(), 0);
      for (std::uint64_t h = 0; h < H; ++h) ++counts[vals[h * M + m]];
      for (std::uint64_t t = 0; t < T; ++t) {
        if (counts[t] != H / T) {
          v.condition_a_exact = false;
          v.worst_m1 = v.worst_m2 = m;
          v.worst_t1 = v.worst_t2 = t;
          break;
        }
      }
    }
  }

  // Condition (b): worst joint fraction over pairs and tag pairs. A failed
  // condition (a) keeps its own witness.
  const bool keep_witness = !v.condition_a_exact;
  std::uint64_t worst = 0;
  std::vector<std::uint32_t> joint(T * T, 0);
  std::vector<std::uint64_t> touched;
  touched.reserve(T * T);
  for (std::uint64_t m1 = 0; m1 < M; ++m1) {
    for (std::uint64_t m2 = m1 + 1; m2 < M; ++m2) {
      for (std::uint64_t h = 0; h < H; ++h) {
        std::uint64_t idx = static_cast<std::uint64_t>(vals[h * M + m1]) * T + vals[h * M + m2];
        if (joint[idx]++ == 0) touched.push_back(idx);
      }
      for (std::uint64_t idx : touched) {
        if (joint[idx] > worst) {
          worst = joint[idx];
          if (!keep_witness) {
            v.worst_m1 = m1; v.worst_m2 = m2;
            v.worst_t1 = idx / T; v.worst_t2 = idx % T;
          }
        }
        joint[idx] = 0;
      }
      touched.clear();
    }
  }
  // fraction of the |H|/|T| members mapping m1 to t1
  v.measured_epsilon = Rational(BigInt(worst) * T, BigInt(H));
  v.is_asu2 = v.condition_a_exact && v.measured_epsilon <= claimed_epsilon;
  v.is_su2 = v.condition_a_exact && v.measured_epsilon <= Rational(1, BigInt(T));
  v.verdict = kind == FamilyKind::SU2 ? v.is_su2 : v.is_asu2;
  return v;
}

CompositionReport verify_composition_theorem(const EnumerableFamily& f,
                                             const EnumerableFamily& h,
                                             const Rational& claimed_epsilon_prime) {
  check_guard(f);
  check_guard(h);
  if (f.range_size != h.domain_size)
    throw std::invalid_argument("composition needs |Z_F| == domain of H");
  const std::uint64_t M = f.domain_size, Z = f.range_size, T = h.range_size;
  const std::uint64_t NF = f.family_size, NH = h.family_size;

  auto hv = verify_family(h, FamilyKind::SU2, Rational(1, BigInt(T)));
  CompositionReport rep;
  rep.h_is_su2 = hv.verdict;
  if (!rep.h_is_su2) throw std::invalid_argument("H failed the SU2 precheck");

  auto fvals = value_table(f);
  auto hvals = value_table(h);

  // measured AU2 epsilon of F
  std::uint64_t worst_f = 0;
  for (std::uint64_t m1 = 0; m1 < M; ++m1)
    for (std::uint64_t m2 = m1 + 1; m2 < M; ++m2) {
      std::uint64_t c = 0;
      for (std::uint64_t fi = 0; fi < NF; ++fi)
        if (fvals[fi * M + m1] == fvals[fi * M + m2]) ++c;
      worst_f = std::max(worst_f, c);
    }
  rep.epsilon_prime_f = Rational(BigInt(worst_f), BigInt(NF));

  // joint table of H: JH[(z1*Z+z2)*T*T + t1*T + t2]
  std::vector<std::uint64_t> jh(Z * Z * T * T, 0);
  for (std::uint64_t hi = 0; hi < NH; ++hi)
    for (std::uint64_t z1 = 0; z1 < Z; ++z1)
      for (std::uint64_t z2 = 0; z2 < Z; ++z2) {
        std::uint64_t t1 = hvals[hi * Z + z1], t2 = hvals[hi * Z + z2];
        ++jh[(z1 * Z + z2) * T * T + t1 * T + t2];
      }

  // condition (a) of G: |{g: g(m)=t}| must be |G|/|T| for every (m, t)
  const BigInt g_size = BigInt(NF) * NH;
  rep.g_condition_a_exact = true;
  {
    std::vector<BigInt> counts(T);
    for (std::uint64_t m = 0; m < M && rep.g_condition_a_exact; ++m) {
      for (auto& c : counts) c = 0;
      for (std::uint64_t fi = 0; fi < NF; ++fi) {
        std::uint64_t z = fvals[fi * M + m];
        for (std::uint64_t t = 0; t < T; ++t) {
          // |{h: h(z)=t}| from the joint diagonal
          counts[t] += jh[(z * Z + z) * T * T + t * T + t];
        }
      }
      for (std::uint64_t t = 0; t < T; ++t)
        if (counts[t] * T != g_size) { rep.g_condition_a_exact = false; break; }
    }
  }

  // measured ASU2 epsilon of G via the F pair histogram convolved with JH
  BigInt worst_g = 0;
  std::vector<std::uint64_t> zpair(Z * Z);
  for (std::uint64_t m1 = 0; m1 < M; ++m1)
    for (std::uint64_t m2 = m1 + 1; m2 < M; ++m2) {
      std::fill(zpair.begin(), zpair.end(), 0);
      for (std::uint64_t fi = 0; fi < NF; ++fi)
        ++zpair[fvals[fi * M + m1] * Z + fvals[fi * M + m2]];
      for (std::uint64_t t1 = 0; t1 < T; ++t1)
        for (std::uint64_t t2 = 0; t2 < T; ++t2) {
          BigInt c = 0;
          for (std::uint64_t zz = 0; zz < Z * Z; ++zz)
            if (zpair[zz]) c += BigInt(zpair[zz]) * jh[zz * T * T + t1 * T + t2];
          if (c > worst_g) worst_g = c;
        }
    }
  rep.epsilon_g = Rational(worst_g * T, g_size);

  auto formula = [&](const Rational& ep) {
    Rational invT(1, BigInt(T));
    return ep * (Rational(1) - invT) + invT;
  };
  rep.formula_epsilon = formula(rep.epsilon_prime_f);
  rep.formula_at_claimed = formula(claimed_epsilon_prime);
  rep.identity_holds = rep.epsilon_g == rep.formula_epsilon;
  rep.forward_holds =
      rep.epsilon_prime_f > claimed_epsilon_prime || rep.epsilon_g <= rep.formula_at_claimed;
  rep.reverse_witnessed =
      rep.epsilon_prime_f <= claimed_epsilon_prime || rep.epsilon_g > rep.formula_at_claimed;
  return rep;
}

EnumerableFamily make_su2_affine_family(unsigned z_bits, unsigned t_bits) {
  if (t_bits > z_bits) throw std::invalid_argument("truncation needs t_bits <= z_bits");
  EnumerableFamily fam;
  fam.domain_size = std::uint64_t{1} << z_bits;
  fam.family_size = std::uint64_t{1} << (z_bits + t_bits);
  fam.range_size = std::uint64_t{1} << t_bits;
  fam.eval = [z_bits, t_bits](std::uint64_t h, std::uint64_t m) {
    Su2Key key;
    key.z_bits = z_bits;
    key.t_bits = t_bits;
    key.a = h >> t_bits;
    key.b = h & ((std::uint64_t{1} << t_bits) - 1);
    return su2_eval_uint(key, m);
  };
  return fam;
}

EnumerableFamily make_all_functions_family(std::uint64_t domain_size, std::uint64_t range_size) {
  EnumerableFamily fam;
  fam.domain_size = domain_size;
  fam.range_size = range_size;
  std::uint64_t n = 1;
  for (std::uint64_t i = 0; i < domain_size; ++i) n *= range_size;
  fam.family_size = n;
  fam.eval = [range_size](std::uint64_t h, std::uint64_t m) {
    for (std::uint64_t i = 0; i < m; ++i) h /= range_size;
    return h % range_size;
  };
  return fam;
}

EnumerableFamily make_poly_family(const Au2FamilySpec& spec, std::vector<BitString> messages) {
  EnumerableFamily fam;
  fam.domain_size = messages.size();
  fam.family_size = std::uint64_t{1} << spec.z_bits;
  fam.range_size = std::uint64_t{1} << spec.z_bits;
  auto msgs = std::make_shared<std::vector<BitString>>(std::move(messages));
  fam.eval = [spec, msgs](std::uint64_t h, std::uint64_t m) {
    return poly_au2_eval_uint(spec, h, (*msgs)[m]);
  };
  return fam;
}

EnumerableFamily make_constant_padded_family(std::uint64_t domain_size, std::uint64_t range_size) {
  EnumerableFamily all = make_all_functions_family(domain_size, range_size);
  EnumerableFamily fam = all;
  fam.family_size = all.family_size + 1;
  fam.eval = [all](std::uint64_t h, std::uint64_t m) {
    if (h == all.family_size) return std::uint64_t{0};  // the constant member
    return all.eval(h, m);
  };
  return fam;
}

}  // namespace qkdlab
