#include "qkdlab/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qkdlab/bases_craft.hpp"
#include "qkdlab/collision_search.hpp"

namespace qkdlab {

namespace {

BitString all_ones(std::size_t n) {
  BitString b(n);
  for (std::size_t i = 0; i < n; ++i) b.set(i, true);
  return b;
}

std::vector<std::uint32_t> all_positions(std::size_t n) {
  std::vector<std::uint32_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint32_t>(i);
  return p;
}

BitString prg_bits(std::uint64_t seed, std::uint64_t counter, std::size_t n) {
  BitString out(n);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) word = mix64(seed ^ mix64(counter * kSeedGamma + i));
    out.set(i, (word >> (63 - i % 64)) & 1);
  }
  return out;
}

std::uint64_t ball_count(std::size_t n, unsigned w, std::uint64_t cap) {
  std::uint64_t total = 0, term = 1;
  for (unsigned k = 0;; ++k) {
    total += term;
    if (total >= cap) return cap;
    if (k == w || k >= n) break;
    term = term * (n - k) / (k + 1);
  }
  return total;
}

BitString transcript_bits(const std::vector<std::uint8_t>& bytes) {
  return BitString::from_bytes(bytes, bytes.size() * 8);
}

// ---------------------------------------------------------------------------
// Toeplitz-seed solution space: all seeds with pa_apply(seed, key) == target.

struct PaSolutionSpace {
  bool solvable = false;
  std::uint32_t out_len = 0;
  BitString particular;
  std::vector<BitString> nullvecs;

  BitString seed_for(std::uint64_t counter) const {
    BitString s = particular;
    for (std::size_t b = 0; b < nullvecs.size(); ++b)
      if ((counter >> b) & 1) s ^= nullvecs[b];
    return s;
  }
};

PaSolutionSpace build_pa_space(const BitString& key, const BitString& target,
                               std::size_t max_dims = 22) {
  PaSolutionSpace sp;
  sp.out_len = static_cast<std::uint32_t>(target.size());
  PaSpec part;
  if (!pa_solve_seed(key, target, part)) return sp;
  sp.particular = part.seed;
  const std::size_t m = key.size(), r = target.size();
  if (r == 0) {
    sp.solvable = true;
    return sp;
  }
  std::size_t first_set = m;
  for (std::size_t j = 0; j < m; ++j)
    if (key.get(j)) { first_set = j; break; }
  if (first_set == m) return sp;
  std::vector<bool> pilot(m + r - 1, false);
  for (std::size_t i = 0; i < r; ++i) pilot[i - first_set + m - 1] = true;
  for (std::size_t q = 0; q < m + r - 1 && sp.nullvecs.size() < max_dims; ++q) {
    if (pilot[q]) continue;
    BitString delta(r);
    for (std::size_t i = 0; i < r; ++i) {
      std::size_t jj = i + m - 1;
      if (jj < q) continue;
      std::size_t j = jj - q;
      if (j < m && key.get(j)) delta.flip(i);
    }
    PaSpec fix;
    pa_solve_seed(key, delta, fix);
    BitString nv = fix.seed;
    nv.flip(q);
    sp.nullvecs.push_back(std::move(nv));
  }
  sp.solvable = true;
  return sp;
}

// ---------------------------------------------------------------------------
// Message builders and reconciliation helpers.

struct EcFields {
  unsigned code_index;
  BitString syndrome;  // as carried on the wire (encrypted under the otp variant)
  std::uint64_t co_point;
  BitString co_value;
};

EcFields parse_ec(const WireMessage& msg) {
  return {static_cast<unsigned>(msg.fields[0].read_uint(0, 8)), msg.fields[1],
          msg.fields[2].read_uint(0, 32), msg.fields[3]};
}

WireMessage build_ec_message(std::uint8_t protocol_id, unsigned code_index,
                             const BitString& syndrome, std::uint64_t co_point,
                             const BitString& co_value) {
  WireMessage msg;
  msg.protocol_id = protocol_id;
  msg.msg_type = MsgType::EcBlock;
  msg.fields = {BitString::from_uint(code_index, 8), syndrome,
                BitString::from_uint(co_point, 32), co_value};
  return msg;
}

std::pair<BitString, BitString> reconciliation_data(const EcCode& code, std::uint64_t co_point,
                                                    const BitString& key) {
  auto perm = ec_interleaver(key.size());
  BitString syn = code.syndrome(ec_permute(key, perm));
  BitString co = confirm(ConfirmSpec{32, co_point}, key);
  return {std::move(syn), std::move(co)};
}

WireMessage build_pa_message(std::uint8_t protocol_id, const PaSpec& spec) {
  WireMessage msg;
  msg.protocol_id = protocol_id;
  msg.msg_type = MsgType::PaSpecMsg;
  msg.fields = {BitString::from_uint(spec.out_len, 32), spec.seed};
  return msg;
}

/// Weight-ascending flip patterns over [0, nbits): weight 0 first, then all
/// single flips, then lexicographic pairs, and so on.
class FlipPatternEnumerator {
 public:
  FlipPatternEnumerator(std::size_t nbits, unsigned max_weight) : n_(nbits), wmax_(max_weight) {}

  const std::vector<std::uint32_t>& next() {
    if (!started_) {
      started_ = true;
      return current_;
    }
    if (current_.empty() || !advance()) {
      ++weight_;
      if (weight_ > wmax_ || weight_ > n_) {
        exhausted_ = true;
        current_.clear();
        return current_;
      }
      current_.resize(weight_);
      for (unsigned i = 0; i < weight_; ++i) current_[i] = i;
    }
    return current_;
  }

 private:
  bool advance() {
    std::size_t w = current_.size();
    std::size_t i = w;
    while (i-- > 0) {
      if (current_[i] != i + n_ - w) {
        ++current_[i];
        for (std::size_t k = i + 1; k < w; ++k) current_[k] = current_[k - 1] + 1;
        return true;
      }
    }
    return false;
  }

  std::size_t n_;
  unsigned wmax_;
  unsigned weight_ = 0;
  bool started_ = false;
  bool exhausted_ = false;
  std::vector<std::uint32_t> current_;
};

// ---------------------------------------------------------------------------
// Shared plumbing: envelope delivery with traces, forging rules, bookkeeping.

struct EveDriver {
  AttackContext& ctx;
  const AttackSpec& spec;
  PublicHashSpec f;
  bool can_forge;
  bool first_forge_recorded = false;

  EveDriver(AttackContext& c, const AttackSpec& s)
      : ctx(c), spec(s), f(c.config.auth.public_hash), can_forge(c.config.auth.digest_public()) {}

  void trace(const char* dir, MsgType t, bool forged, unsigned weight, std::uint64_t cands) {
    ctx.outcome.trace.push_back({dir, t, forged, weight, cands});
    if (forged) {
      ctx.outcome.forge_candidates_total += cands;
      ctx.outcome.forge_weight_total += weight;
    }
  }

  void note_first_forge(bool accepted) {
    if (!first_forge_recorded) {
      first_forge_recorded = true;
      ctx.outcome.first_forge_accepted = accepted;
    }
  }

  std::vector<Envelope> to_alice(const Envelope& env, bool forged, unsigned weight = 0,
                                 std::uint64_t cands = 0) {
    trace("B->A", env.msg.msg_type, forged, weight, cands);
    auto replies = ctx.alice.on_message(env);
    // only tag-carrying substitutions are actually verified by the receiver
    if (forged && env.tag) note_first_forge(!ctx.alice.view().aborted);
    return replies;
  }

  std::vector<Envelope> to_bob(const Envelope& env, bool forged, unsigned weight = 0,
                               std::uint64_t cands = 0) {
    trace("A->B", env.msg.msg_type, forged, weight, cands);
    auto replies = ctx.bob.on_message(env);
    if (forged && env.tag) note_first_forge(!ctx.bob.view().aborted);
    return replies;
  }

  BitString auth_prefix(const Envelope& intercepted) const {
    const AuthScheme& a = ctx.config.auth;
    switch (a.variant) {
      case AuthVariant::Salted: return a.salt;
      case AuthVariant::NonceAlice:
      case AuthVariant::NonceBob:
        return intercepted.nonce ? *intercepted.nonce : BitString();
      default: return BitString();
    }
  }

  /// Substitute `preferred` for an intercepted message: forge a collision on
  /// the given field when the digest is public, reuse the stale tag otherwise.
  Envelope substitute_free(const Envelope& intercepted, WireMessage preferred,
                           std::size_t field_index, unsigned& weight_out,
                           std::uint64_t& cands_out, bool& forged_ok) {
    weight_out = 0;
    cands_out = 0;
    forged_ok = true;
    Envelope env;
    if (!intercepted.tag) {
      env = Envelope(std::move(preferred));
      return env;
    }
    if (can_forge) {
      BitString prefix = auth_prefix(intercepted);
      std::uint64_t target = frame_digest(f, intercepted.msg, prefix);
      MutationSpace space;
      space.mutable_field = field_index;
      space.mutable_positions = all_positions(preferred.fields[field_index].size());
      space.w_max = spec.w_max;
      space.base_message = std::move(preferred);
      ForgeResult res = find_colliding_message(space, target, f, prefix);
      cands_out = res.candidates_tested;
      if (!res.found) {
        forged_ok = false;
        env = Envelope(std::move(space.base_message));
      } else {
        weight_out = res.weight_used;
        env = Envelope(std::move(res.message));
      }
    } else {
      env = Envelope(std::move(preferred));
    }
    env.tag = intercepted.tag;
    env.nonce = intercepted.nonce;
    return env;
  }

  void finish(const BitString& sifted_ea, const BitString& sifted_eb,
              std::optional<BitString> key_ea, std::optional<BitString> key_eb) {
    ctx.outcome.sifted_e_alice_side = sifted_ea;
    ctx.outcome.sifted_e_bob_side = sifted_eb;
    ctx.outcome.key_e_alice_side = std::move(key_ea);
    ctx.outcome.key_e_bob_side = std::move(key_eb);
  }
};

QuantumFrame eve_prepare(const RawKey& raw, const BasisString& bases, double blank_fraction,
                         Rng& rng) {
  std::vector<QuantumFrame::Slot> slots(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (raw.is_empty(k) || rng.chance(blank_fraction)) continue;  // stays Lost
    slots[k] = {false, bases.get(k), raw.bit(k)};
  }
  return frame_from_slots(std::move(slots));
}

/// Searches reconciliation blocks over weight-ascending mutations of Eve's
/// key until the frame collides with target_digest.
struct EcForgeResult {
  bool found = false;
  BitString key;
  WireMessage msg;
  unsigned weight = 0;
  std::uint64_t cands = 0;
};

EcForgeResult forge_ec_message(const EveDriver& eve, std::uint8_t protocol_id, const EcCode& code,
                               std::uint64_t co_point, const BitString& key,
                               std::uint64_t target_digest, const BitString& hash_prefix,
                               const BitString& hash_suffix, const BitString& otp_pad,
                               unsigned w_max, std::uint64_t max_candidates) {
  EcForgeResult out;
  const std::size_t m = key.size();
  auto perm = ec_interleaver(m);
  auto [base_syn, base_co] = reconciliation_data(code, co_point, key);
  if (otp_pad.size()) base_syn ^= otp_pad;

  std::vector<std::uint32_t> inv(m);
  for (std::size_t i = 0; i < m; ++i) inv[perm[i]] = static_cast<std::uint32_t>(i);

  // per-bit confirmation deltas: data block j contributes value * point^(j+2)
  Gf2Field co_field(32);
  std::vector<std::uint64_t> point_pow(m / 32 + 4, 1);
  for (std::size_t i = 1; i < point_pow.size(); ++i)
    point_pow[i] = co_field.mul(point_pow[i - 1], co_point);
  std::vector<std::uint64_t> co_delta(m);
  for (std::size_t p = 0; p < m; ++p)
    co_delta[p] =
        co_field.mul(std::uint64_t{1} << (31 - p % 32), point_pow[p / 32 + 2]);

  FlipPatternEnumerator en(m, w_max);
  BitString syn = base_syn;
  std::uint64_t co_acc = base_co.read_uint(0, 32);
  std::vector<std::uint32_t> last;

  auto toggle = [&](std::uint32_t p) {
    std::uint32_t pp = inv[p];
    std::size_t blk = pp / code.block_len();
    std::uint16_t sd = code.columns()[pp % code.block_len()];
    for (unsigned b = 0; b < code.syndrome_len(); ++b)
      if ((sd >> (code.syndrome_len() - 1 - b)) & 1) syn.flip(blk * code.syndrome_len() + b);
    co_acc ^= co_delta[p];
  };

  auto emit = [&](std::uint64_t) -> std::vector<std::uint8_t> {
    const auto& pat = en.next();
    for (auto p : last) toggle(p);
    last.assign(pat.begin(), pat.end());
    for (auto p : last) toggle(p);
    return encode_frame(build_ec_message(protocol_id, code.index(), syn, co_point,
                                         BitString::from_uint(co_acc, 32)));
  };

  std::uint64_t cap = std::min<std::uint64_t>(max_candidates, ball_count(m, w_max, max_candidates));
  GeneratedForge g =
      search_generated(emit, target_digest, eve.f, cap, hash_prefix, hash_suffix);
  out.cands = g.candidates_tested;
  if (!g.found) return out;
  out.found = true;
  out.key = key;
  for (auto p : last) out.key.flip(p);
  out.weight = static_cast<unsigned>(last.size());
  out.msg = build_ec_message(protocol_id, code.index(), syn, co_point,
                             BitString::from_uint(co_acc, 32));
  return out;
}

struct PaForgeOutcome {
  bool found = false;
  WireMessage msg;
  PaSpec spec;
  std::uint64_t cands = 0;
};

/// Searches PA descriptions colliding with target_digest. With target_out
/// the candidates all satisfy pa(seed, key) == *target_out.
PaForgeOutcome forge_pa_message(const EveDriver& eve, std::uint8_t protocol_id,
                                const BitString& key, const std::optional<BitString>& target_out,
                                std::uint64_t target_digest, const BitString& hash_prefix,
                                const BitString& hash_suffix, std::uint64_t max_candidates,
                                std::uint64_t prg_seed) {
  PaForgeOutcome out;
  if (target_out) {
    PaSolutionSpace space = build_pa_space(key, *target_out);
    if (space.solvable) {
      PaSpec cand;
      cand.out_len = space.out_len;
      auto emit = [&](std::uint64_t c) -> std::vector<std::uint8_t> {
        cand.seed = space.seed_for(c);
        return encode_frame(build_pa_message(protocol_id, cand));
      };
      std::uint64_t cap =
          space.nullvecs.size() >= 63
              ? max_candidates
              : std::min<std::uint64_t>(max_candidates, std::uint64_t{1} << space.nullvecs.size());
      GeneratedForge g = search_generated(emit, target_digest, eve.f, cap, hash_prefix, hash_suffix);
      out.cands += g.candidates_tested;
      if (g.found) {
        out.found = true;
        cand.seed = space.seed_for(g.counter);
        out.spec = cand;
        out.msg = build_pa_message(protocol_id, cand);
        return out;
      }
    }
    // fall through to the separate-worlds acceptance
  }
  std::uint32_t r = target_out ? static_cast<std::uint32_t>(target_out->size())
                               : pa_output_length(key.size(), 0.0);
  PaSpec cand;
  cand.out_len = r;
  std::size_t seed_len = r ? key.size() + r - 1 : 0;
  auto emit = [&](std::uint64_t c) -> std::vector<std::uint8_t> {
    cand.seed = prg_bits(prg_seed, c, seed_len);
    return encode_frame(build_pa_message(protocol_id, cand));
  };
  GeneratedForge g =
      search_generated(emit, target_digest, eve.f, max_candidates, hash_prefix, hash_suffix);
  out.cands += g.candidates_tested;
  if (g.found) {
    out.found = true;
    cand.seed = prg_bits(prg_seed, g.counter, seed_len);
    out.spec = cand;
    out.msg = build_pa_message(protocol_id, cand);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Straightforward MITM: independent sessions, every inserted tag guessed.

class StraightforwardMitmAttack : public AttackStrategyBase {
 public:
  explicit StraightforwardMitmAttack(const AttackSpec& spec) : spec_(spec) {}

  void run(AttackContext& ctx) override {
    EveDriver eve(ctx, spec_);
    const std::size_t n = ctx.config.n_slots;
    const ProtocolShape shape = protocol_shape(ctx.config.variant);
    auto frame = ctx.alice.emit_quantum();
    BasisString eve_bases = ctx.eve_rng.bits(n);
    RawKey eve_raw = measure(frame, eve_bases, kIdealChannel, ctx.eve_rng);
    (void)eve_raw;

    BasisString b2 = ctx.eve_rng.bits(n);
    RawKey r2 = RawKey::from_bits(ctx.eve_rng.bits(n));
    ctx.bob.on_quantum(prepare(r2, b2), ChannelParams{0.0, spec_.eve_flip_prob});

    // First message Eve must insert toward Alice, tag guessed uniformly.
    WireMessage first;
    first.protocol_id = shape.id;
    if (shape.bob_sends_bases) {
      first.msg_type = MsgType::BasesB;
      first.fields = {eve_bases, all_ones(n)};
    } else {
      first.msg_type = shape.delayed_auth ? MsgType::Nonce : MsgType::Ack;
      first.fields = {shape.delayed_auth ? ctx.eve_rng.bits(64) : BitString::from_uint(0xa5, 8)};
    }
    Envelope env(std::move(first));
    if (!shape.delayed_auth) env.tag = Tag{ctx.eve_rng.bits(ctx.config.auth.t_bits)};
    if (ctx.config.auth.needs_nonce()) env.nonce = ctx.eve_rng.bits(64);
    eve.to_alice(env, true, 0, 1);
    // Delayed shapes accept the untagged opener; the guessed delayed tag would
    // be checked at the end. Either way one uniform guess decides.
    if (shape.delayed_auth) {
      ctx.outcome.first_forge_accepted =
          ctx.eve_rng.below(std::uint64_t{1} << std::min<unsigned>(ctx.config.auth.t_bits, 63)) == 0;
    }
    ctx.outcome.attack_goal_met = ctx.outcome.first_forge_accepted;
  }

 private:
  AttackSpec spec_;
};

// ---------------------------------------------------------------------------
// The sifting-stage matrix plus the derived-PA and encrypted-syndrome
// variants of its cells.

class MatrixAttack : public AttackStrategyBase {
 public:
  explicit MatrixAttack(const AttackSpec& spec) : spec_(spec) {}

  void run(AttackContext& ctx) override {
    EveDriver eve(ctx, spec_);
    const ProtocolShape shape = protocol_shape(ctx.config.variant);
    ctx.outcome.goal_relation = !shape.pa_message ? FinalRelation::SeparateWorlds
                                : (shape.delayed_auth && !spec_.qm) ? FinalRelation::BobSideOnly
                                                                     : FinalRelation::AllEqual;
    if (spec_.row_bob_sends)
      run_bob_sends(ctx, eve);
    else
      run_alice_sends(ctx, eve);
  }

 private:
  AttackSpec spec_;

  std::size_t craft_budget(std::size_t n) const {
    return spec_.craft_budget
               ? spec_.craft_budget
               : static_cast<std::size_t>(4.0 * std::sqrt(static_cast<double>(n))) + 16;
  }

  void run_alice_sends(AttackContext& ctx, EveDriver& eve);
  void run_bob_sends(AttackContext& ctx, EveDriver& eve);
  void chain_endgame(AttackContext& ctx, EveDriver& eve, std::vector<Envelope> from_alice,
                     const BitString& k_a);
  void post_sift_independent(AttackContext& ctx, EveDriver& eve,
                             std::vector<Envelope> from_alice, BitString k_ea, BitString k_eb,
                             unsigned uncertain_alice_bits);
  void finish_independent(AttackContext& ctx, EveDriver& eve, std::vector<Envelope> from_bob,
                          const BitString& k_a_guess, const BitString& k_ea,
                          const BitString& k_eb, bool alice_side_known);
};

void MatrixAttack::run_alice_sends(AttackContext& ctx, EveDriver& eve) {
  const std::size_t n = ctx.config.n_slots;
  const ProtocolShape shape = protocol_shape(ctx.config.variant);
  const bool delayed = shape.delayed_auth;

  auto frame = ctx.alice.emit_quantum();

  std::optional<QuantumMemory> memory;
  BasisString eve_bases = ctx.eve_rng.bits(n);
  RawKey eve_raw;
  if (spec_.qm) {
    memory.emplace(memory_store(std::move(frame)));
    eve_raw = RawKey::from_bits(ctx.eve_rng.bits(n));
  } else {
    auto ir = intercept_resend(std::move(frame), eve_bases, ctx.eve_rng);
    eve_raw = std::move(ir.eve_raw);
  }
  auto b_replies =
      ctx.bob.on_quantum(eve_prepare(eve_raw, eve_bases, spec_.qm ? spec_.blank_fraction : 0.0,
                                     ctx.eve_rng),
                         ChannelParams{0.0, spec_.eve_flip_prob});
  if (b_replies.empty()) return;

  auto a_replies = eve.to_alice(b_replies[0], false);  // ack or nonce, untouched
  if (a_replies.empty()) return;
  Envelope s3 = std::move(a_replies[0]);
  const BitString bases_a = s3.msg.fields[0];

  BitString i_a;       // Alice's raw key as far as Eve can tell
  BitString known_a;   // slots where that knowledge is certain
  BitString eve_raw_bits = eve_raw.to_bits();
  if (spec_.qm) {
    i_a = memory->measure_in(bases_a, ctx.eve_rng).to_bits();
    known_a = all_ones(n);
  } else {
    i_a = eve_raw_bits;
    known_a = BitString(n);
    for (std::size_t k = 0; k < n; ++k) known_a.set(k, bases_a.get(k) == eve_bases.get(k));
  }

  // Substitute Eve's bases toward Bob.
  WireMessage preferred = s3.msg;
  preferred.fields[0] = eve_bases;
  unsigned w1 = 0;
  std::uint64_t c1 = 0;
  bool ok1 = true;
  Envelope s3p = eve.substitute_free(s3, std::move(preferred), 0, w1, c1, ok1);
  if (!ok1) {
    eve.finish(BitString(), BitString(), std::nullopt, std::nullopt);
    return;
  }
  const BitString claimed_bases = s3p.msg.fields[0];
  b_replies = eve.to_bob(s3p, true, w1, c1);
  if (ctx.bob.view().aborted || b_replies.empty()) {
    eve.finish(BitString(), BitString(), std::nullopt, std::nullopt);
    return;
  }
  Envelope s4 = std::move(b_replies[0]);
  const BitString mask_eb = s4.msg.fields[0];

  // Eve's prediction of Bob's sifted key: slots where the claimed basis
  // deviates from her true preparation were measured obliquely by Bob.
  BitString k_eb = apply_mask(eve_raw_bits, mask_eb);

  if (delayed) {
    // One-sided rows: nothing from Bob to Alice is touched.
    auto a2 = eve.to_alice(s4, false);
    BitString k_ea = apply_mask(i_a, mask_eb);
    unsigned uncertain = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (mask_eb.get(k) && !known_a.get(k)) ++uncertain;
    post_sift_independent(ctx, eve, std::move(a2), std::move(k_ea), std::move(k_eb), uncertain);
    return;
  }

  if (spec_.qm) {
    // The full interleave: craft Alice's mask so she sifts Eve's Bob-side key.
    CraftedMask crafted;
    try {
      crafted = craft_bases_mask(i_a, k_eb, craft_budget(n));
    } catch (const CraftFailure&) {
      eve.finish(BitString(), k_eb, std::nullopt, std::nullopt);
      return;
    }
    WireMessage mask_msg = s4.msg;
    mask_msg.fields[0] = crafted.mask;
    Envelope s4p;
    unsigned w2 = 0;
    std::uint64_t c2 = 0;
    if (s4.tag && eve.can_forge) {
      BitString prefix = eve.auth_prefix(s4);
      std::uint64_t target = frame_digest(eve.f, s4.msg, prefix);
      auto res = find_colliding_mask(
          mask_msg, 0, target, eve.f, spec_.max_swaps,
          [&](std::uint32_t p, std::uint32_t q) { return i_a.get(p) == i_a.get(q); }, prefix);
      c2 = res.candidates_tested;
      if (!res.found) {
        eve.finish(BitString(), k_eb, std::nullopt, std::nullopt);
        return;
      }
      w2 = res.weight_used;
      s4p = Envelope(std::move(res.message));
    } else {
      s4p = Envelope(std::move(mask_msg));
    }
    s4p.tag = s4.tag;
    s4p.nonce = s4.nonce;
    BitString mask_for_alice = s4p.msg.fields[0];
    auto a2 = eve.to_alice(s4p, true, w2, c2);
    if (ctx.alice.view().aborted) {
      eve.finish(BitString(), k_eb, std::nullopt, std::nullopt);
      return;
    }
    chain_endgame(ctx, eve, std::move(a2), apply_mask(i_a, mask_for_alice));
    return;
  }

  // No memory, immediate: Alice's mask selects her slots that met Eve's true
  // measurement bases; Eve's copy there is exact.
  BitString m_ae(n);
  for (std::size_t k = 0; k < n; ++k) m_ae.set(k, bases_a.get(k) == eve_bases.get(k));
  if (shape.otp_syndrome) {
    // pads are drawn from one shared cursor: keep Alice's syndrome at least
    // as long as Bob's by topping the mask up to Bob's sifted length
    std::size_t deficit_target = mask_eb.popcount();
    std::size_t have = m_ae.popcount();
    for (std::size_t k = 0; k < n && have < deficit_target; ++k)
      if (!m_ae.get(k)) {
        m_ae.set(k, true);
        ++have;
      }
  }
  WireMessage mask_msg = s4.msg;
  mask_msg.fields[0] = m_ae;
  unsigned w2 = 0;
  std::uint64_t c2 = 0;
  bool ok2 = true;
  Envelope s4p = eve.substitute_free(s4, std::move(mask_msg), 0, w2, c2, ok2);
  if (!ok2) {
    eve.finish(BitString(), k_eb, std::nullopt, std::nullopt);
    return;
  }
  BitString mask_for_alice = s4p.msg.fields[0];
  auto a2 = eve.to_alice(s4p, true, w2, c2);
  if (ctx.alice.view().aborted) {
    eve.finish(BitString(), k_eb, std::nullopt, std::nullopt);
    return;
  }
  BitString k_ea = apply_mask(eve_raw_bits, mask_for_alice);
  unsigned uncertain = 0;
  for (std::size_t k = 0; k < n; ++k)
    if (mask_for_alice.get(k) && !known_a.get(k)) ++uncertain;
  post_sift_independent(ctx, eve, std::move(a2), std::move(k_ea), std::move(k_eb), uncertain);
}

void MatrixAttack::run_bob_sends(AttackContext& ctx, EveDriver& eve) {
  const std::size_t n = ctx.config.n_slots;
  const ProtocolShape shape = protocol_shape(ctx.config.variant);
  const bool delayed = shape.delayed_auth;

  auto frame = ctx.alice.emit_quantum();
  std::optional<QuantumMemory> memory;
  BasisString eve_bases = ctx.eve_rng.bits(n);
  RawKey eve_raw;
  if (spec_.qm) {
    memory.emplace(memory_store(std::move(frame)));
    eve_raw = RawKey::from_bits(ctx.eve_rng.bits(n));
  } else {
    auto ir = intercept_resend(std::move(frame), eve_bases, ctx.eve_rng);
    eve_raw = std::move(ir.eve_raw);
  }
  BitString eve_raw_bits = eve_raw.to_bits();
  auto b_replies = ctx.bob.on_quantum(eve_prepare(eve_raw, eve_bases, 0.0, ctx.eve_rng),
                                      ChannelParams{0.0, spec_.eve_flip_prob});
  if (b_replies.empty()) return;
  Envelope s2 = std::move(b_replies[0]);
  const BitString bases_b = s2.msg.fields[0];
  const BitString presence_b = s2.msg.fields[1];

  Envelope s2_to_alice = s2;
  bool substituted_s2 = false;
  unsigned w1 = 0;
  std::uint64_t c1 = 0;
  if (!spec_.qm && !delayed) {
    WireMessage preferred = s2.msg;
    preferred.fields[0] = eve_bases;
    preferred.fields[1] = all_ones(n);
    bool ok1 = true;
    s2_to_alice = eve.substitute_free(s2, std::move(preferred), 0, w1, c1, ok1);
    substituted_s2 = true;
    if (!ok1) {
      eve.finish(BitString(), BitString(), std::nullopt, std::nullopt);
      return;
    }
  }
  auto a_replies = eve.to_alice(s2_to_alice, substituted_s2, w1, c1);
  if (ctx.alice.view().aborted || a_replies.size() < 2) {
    eve.finish(BitString(), BitString(), std::nullopt, std::nullopt);
    return;
  }
  Envelope s3 = std::move(a_replies[0]);
  Envelope p1 = std::move(a_replies[1]);
  const BitString mask_a = s3.msg.fields[0];

  // Eve's Alice-side key and its certainty.
  BitString k_ea;
  unsigned uncertain = 0;
  if (spec_.qm) {
    RawKey copy = memory->measure_in(bases_b, ctx.eve_rng);
    BitString g(n);
    for (std::size_t k = 0; k < n; ++k) g.set(k, !copy.is_empty(k) && copy.bit(k));
    k_ea = apply_mask(g, mask_a);  // mask slots were measured in Alice's own basis
  } else {
    k_ea = apply_mask(eve_raw_bits, mask_a);
    const BitString& compared = substituted_s2 ? s2_to_alice.msg.fields[0] : bases_b;
    for (std::size_t k = 0; k < n; ++k) {
      if (!mask_a.get(k)) continue;
      // Alice kept slot k because her basis matched `compared`; Eve is certain
      // only when she truly measured in that same basis.
      if (eve_bases.get(k) != compared.get(k)) ++uncertain;
    }
  }

  // Substitute the sift mask toward Bob with Eve's own matching positions.
  BitString m_eb(n);
  for (std::size_t k = 0; k < n; ++k)
    m_eb.set(k, presence_b.get(k) && eve_bases.get(k) == bases_b.get(k));
  WireMessage mask_msg = s3.msg;
  mask_msg.fields[0] = m_eb;
  unsigned w2 = 0;
  std::uint64_t c2 = 0;
  bool ok2 = true;
  Envelope s3p = eve.substitute_free(s3, std::move(mask_msg), 0, w2, c2, ok2);
  if (!ok2) {
    eve.finish(k_ea, BitString(), std::nullopt, std::nullopt);
    return;
  }
  BitString delivered_mask = s3p.msg.fields[0];
  eve.to_bob(s3p, true, w2, c2);
  if (ctx.bob.view().aborted) {
    eve.finish(k_ea, BitString(), std::nullopt, std::nullopt);
    return;
  }
  BitString k_eb = apply_mask(eve_raw_bits, delivered_mask);

  std::vector<Envelope> from_alice;
  from_alice.push_back(std::move(p1));
  post_sift_independent(ctx, eve, std::move(from_alice), std::move(k_ea), std::move(k_eb),
                        uncertain);
}

/// Case-1 endgame: everything after sifting passes untouched; Eve only reads.
void MatrixAttack::chain_endgame(AttackContext& ctx, EveDriver& eve,
                                 std::vector<Envelope> from_alice, const BitString& k_a) {
  const ProtocolShape shape = protocol_shape(ctx.config.variant);
  if (from_alice.empty()) {
    eve.finish(k_a, k_a, std::nullopt, std::nullopt);
    return;
  }
  auto b2 = eve.to_bob(from_alice[0], false);  // Alice's reconciliation block
  if (ctx.bob.view().aborted || b2.empty()) {
    eve.finish(k_a, k_a, std::nullopt, std::nullopt);
    return;
  }
  auto a3 = eve.to_alice(b2[0], false);  // status
  std::optional<BitString> key_e;
  if (shape.pa_message) {
    if (!a3.empty()) {
      PaSpec spec;
      spec.out_len = static_cast<std::uint32_t>(a3[0].msg.fields[0].read_uint(0, 32));
      spec.seed = a3[0].msg.fields[1];
      key_e = pa_apply(spec, k_a);
      eve.to_bob(a3[0], false);
    }
  } else if (!ctx.alice.view().aborted) {
    PaSpec spec = derive_transcript_pa(ctx.alice.transcript_to_bob(),
                                       ctx.alice.transcript_to_alice(), k_a.size(),
                                       ctx.alice.view().reported_eps);
    key_e = pa_apply(spec, k_a);
    // Bob's locally derived key comes from his own differing view.
    if (!ctx.bob.view().aborted && ctx.bob.view().final_key) {
      PaSpec bspec = derive_transcript_pa(ctx.bob.transcript_to_bob(),
                                          ctx.bob.transcript_to_alice(),
                                          ctx.bob.view().reconciled.size(),
                                          ctx.bob.view().reported_eps);
      eve.finish(k_a, k_a, key_e, pa_apply(bspec, ctx.bob.view().reconciled));
      return;
    }
  }
  eve.finish(k_a, k_a, key_e, key_e);
}

void MatrixAttack::post_sift_independent(AttackContext& ctx, EveDriver& eve,
                                         std::vector<Envelope> from_alice, BitString k_ea,
                                         BitString k_eb, unsigned uncertain_alice_bits) {
  const ProtocolShape shape = protocol_shape(ctx.config.variant);
  ctx.outcome.eve_uncertain_bits = uncertain_alice_bits;
  if (from_alice.empty()) {
    eve.finish(k_ea, k_eb, std::nullopt, std::nullopt);
    return;
  }
  Envelope p1 = std::move(from_alice[0]);
  EcFields ta = parse_ec(p1.msg);
  const EcCode& code = published_codes()[ta.code_index - 1];

  // Correct (or guess) Eve's Alice-side key from Alice's own block.
  BitString k_a_guess = k_ea;
  BitString otp_pad;
  bool alice_side_known = false;
  if (shape.otp_syndrome) {
    // Her own values at uncertain slots are already a uniform guess; the
    // confirmation value tells her whether the guess hit.
    auto [syn_guess, co_guess] = reconciliation_data(code, ta.co_point, k_a_guess);
    alice_side_known = co_guess == ta.co_value;
    if (syn_guess.size() == ta.syndrome.size()) otp_pad = syn_guess ^ ta.syndrome;
  } else {
    auto perm = ec_interleaver(k_ea.size());
    std::size_t expect =
        ((k_ea.size() + code.block_len() - 1) / code.block_len()) * code.syndrome_len();
    if (ta.syndrome.size() == expect && !k_ea.empty()) {
      k_a_guess = ec_unpermute(code.correct(ec_permute(k_ea, perm), ta.syndrome), perm);
      alice_side_known = confirm(ConfirmSpec{32, ta.co_point}, k_a_guess) == ta.co_value;
    }
  }

  // Build and deliver Eve's reconciliation block toward Bob.
  BitString bob_pad;
  if (shape.otp_syndrome) {
    std::size_t bob_syn =
        ((k_eb.size() + code.block_len() - 1) / code.block_len()) * code.syndrome_len();
    if (bob_syn <= otp_pad.size())
      bob_pad = otp_pad.slice(0, bob_syn);
    else
      bob_pad = BitString(bob_syn);  // pad unknown past Alice's length: hopeless filler
  }

  Envelope p1p;
  unsigned w = 0;
  std::uint64_t c = 0;
  bool ec_needs_collision = p1.tag.has_value() && eve.can_forge;
  bool ec_tag_delayed = shape.delayed_auth && !shape.pa_message;  // the tag rides here
  if (ec_needs_collision || (ec_tag_delayed && eve.can_forge)) {
    BitString prefix, suffix;
    std::uint64_t target;
    if (ec_tag_delayed) {
      BitString pre = p1.nonce ? *p1.nonce : BitString();
      BitString whole = pre;
      whole.append(transcript_bits(ctx.alice.transcript_to_bob()));
      target = public_hash_uint(eve.f, whole);
      prefix = pre;
      prefix.append(transcript_bits(ctx.bob.transcript_to_bob()));
    } else {
      prefix = eve.auth_prefix(p1);
      target = frame_digest(eve.f, p1.msg, prefix);
    }
    auto res = forge_ec_message(eve, shape.id, code, ta.co_point, k_eb, target, prefix, suffix,
                                bob_pad, spec_.w_max, spec_.max_candidates);
    c = res.cands;
    if (!res.found) {
      eve.finish(k_a_guess, k_eb, std::nullopt, std::nullopt);
      return;
    }
    w = res.weight;
    k_eb = res.key;
    p1p = Envelope(std::move(res.msg));
  } else {
    auto [syn, co] = reconciliation_data(code, ta.co_point, k_eb);
    if (bob_pad.size()) syn ^= bob_pad;
    p1p = Envelope(build_ec_message(shape.id, code.index(), syn, ta.co_point, co));
  }
  p1p.tag = p1.tag;
  p1p.nonce = p1.nonce;
  auto from_bob = eve.to_bob(p1p, true, w, c);
  finish_independent(ctx, eve, std::move(from_bob), k_a_guess, k_ea, k_eb, alice_side_known);
}

void MatrixAttack::finish_independent(AttackContext& ctx, EveDriver& eve,
                                      std::vector<Envelope> from_bob, const BitString& k_a_guess,
                                      const BitString& k_ea, const BitString& k_eb,
                                      bool alice_side_known) {
  const ProtocolShape shape = protocol_shape(ctx.config.variant);
  if (ctx.bob.view().aborted || from_bob.empty()) {
    eve.finish(alice_side_known ? k_a_guess : k_ea, k_eb, std::nullopt, std::nullopt);
    return;
  }
  auto a3 = eve.to_alice(from_bob[0], false);  // status, untouched
  if (ctx.alice.view().aborted) {
    eve.finish(alice_side_known ? k_a_guess : k_ea, k_eb, std::nullopt, std::nullopt);
    return;
  }

  // Bob reconciled toward Eve's key: she holds his corrected key exactly.
  const BitString& bob_key = k_eb;

  if (!shape.pa_message) {
    // Both parties derived their own PA from their own views; Eve reproduces
    // each side.
    std::optional<BitString> kea_final, keb_final;
    if (alice_side_known) {
      PaSpec aspec = derive_transcript_pa(ctx.alice.transcript_to_bob(),
                                          ctx.alice.transcript_to_alice(), k_a_guess.size(),
                                          ctx.alice.view().reported_eps);
      kea_final = pa_apply(aspec, k_a_guess);
    }
    PaSpec bspec =
        derive_transcript_pa(ctx.bob.transcript_to_bob(), ctx.bob.transcript_to_alice(),
                             bob_key.size(), ctx.bob.view().reported_eps);
    keb_final = pa_apply(bspec, bob_key);
    eve.finish(alice_side_known ? k_a_guess : k_ea, k_eb, std::move(kea_final),
               std::move(keb_final));
    return;
  }

  if (a3.empty()) {
    eve.finish(alice_side_known ? k_a_guess : k_ea, k_eb, std::nullopt, std::nullopt);
    return;
  }
  Envelope p3 = std::move(a3[0]);
  PaSpec alice_pa;
  alice_pa.out_len = static_cast<std::uint32_t>(p3.msg.fields[0].read_uint(0, 32));
  alice_pa.seed = p3.msg.fields[1];
  std::optional<BitString> key_a;
  if (alice_side_known) key_a = pa_apply(alice_pa, k_a_guess);

  Envelope p3p;
  unsigned w = 0;
  std::uint64_t c = 0;
  if ((p3.tag && eve.can_forge) || shape.delayed_auth) {
    BitString prefix, suffix;
    std::uint64_t target = 0;
    bool forgeable = eve.can_forge;
    if (shape.delayed_auth) {
      BitString pre = p3.nonce ? *p3.nonce : BitString();
      BitString whole = pre;
      whole.append(transcript_bits(ctx.alice.transcript_to_bob()));
      target = public_hash_uint(eve.f, whole);
      prefix = pre;
      prefix.append(transcript_bits(ctx.bob.transcript_to_bob()));
    } else {
      prefix = eve.auth_prefix(p3);
      target = frame_digest(eve.f, p3.msg, prefix);
    }
    if (forgeable) {
      auto res = forge_pa_message(eve, shape.id, bob_key, key_a, target, prefix, suffix,
                                  spec_.max_candidates, ctx.eve_rng.next_u64());
      c = res.cands;
      if (!res.found) {
        eve.finish(alice_side_known ? k_a_guess : k_ea, k_eb, key_a, std::nullopt);
        return;
      }
      p3p = Envelope(std::move(res.msg));
    } else {
      PaSpec cand;
      cand.out_len = alice_pa.out_len;
      cand.seed = cand.out_len ? prg_bits(ctx.eve_rng.next_u64(), 0,
                                          bob_key.size() + cand.out_len - 1)
                               : BitString();
      p3p = Envelope(build_pa_message(shape.id, cand));
    }
  } else {
    // untagged или stale-tag path
    PaSpec cand;
    std::optional<BitString> target_out = key_a;
    if (target_out) {
      PaSolutionSpace space = build_pa_space(bob_key, *target_out);
      if (space.solvable) {
        cand.out_len = space.out_len;
        cand.seed = space.seed_for(0);
      } else {
        target_out.reset();
      }
    }
    if (!target_out) {
      cand.out_len = alice_pa.out_len;
      cand.seed = cand.out_len ? prg_bits(ctx.eve_rng.next_u64(), 0,
                                          bob_key.size() + cand.out_len - 1)
                               : BitString();
    }
    p3p = Envelope(build_pa_message(shape.id, cand));
  }
  p3p.tag = p3.tag;
  p3p.nonce = p3.nonce;
  eve.to_bob(p3p, true, w, c);

  PaSpec delivered;
  delivered.out_len = static_cast<std::uint32_t>(p3p.msg.fields[0].read_uint(0, 32));
  delivered.seed = p3p.msg.fields[1];
  std::optional<BitString> key_eb_final;
  if (!ctx.bob.view().aborted) key_eb_final = pa_apply(delivered, bob_key);
  eve.finish(alice_side_known ? k_a_guess : k_ea, k_eb, key_a, std::move(key_eb_final));
}

// ---------------------------------------------------------------------------
// The reordered two-leg attack on delayed authentication: Eve completes Bob's
// leg first to harvest his transcript tag, then answers Alice with a message
// group colliding with it.

class BidirectionalQmAttack : public AttackStrategyBase {
 public:
  explicit BidirectionalQmAttack(const AttackSpec& spec) : spec_(spec) {}

  void run(AttackContext& ctx) override {
    EveDriver eve(ctx, spec_);
    ctx.outcome.goal_relation = FinalRelation::AllEqual;
    const ProtocolShape shape = protocol_shape(ctx.config.variant);
    if (shape.bob_sends_bases || !shape.delayed_auth)
      throw std::invalid_argument("the reordered attack targets the delayed Alice-sends shape");

    auto frame = ctx.alice.emit_quantum();
    QuantumMemory memory = memory_store(std::move(frame));

    // Trigger Alice's bases with Eve's own nonce.
    WireMessage nmsg;
    nmsg.protocol_id = shape.id;
    nmsg.msg_type = MsgType::Nonce;
    BitString eve_nonce = ctx.eve_rng.bits(64);
    nmsg.fields = {eve_nonce};
    Envelope s2p(std::move(nmsg));
    auto a_replies = eve.to_alice(s2p, true, 0, 0);
    if (ctx.alice.view().aborted || a_replies.empty()) return;
    Envelope s3 = std::move(a_replies[0]);
    const BitString bases_a = s3.msg.fields[0];

    BitString i_a = memory.measure_in(bases_a, ctx.eve_rng).to_bits();

    // Bob's leg, played with an identical copy of Alice's signals.
    auto b_replies = ctx.bob.on_quantum(
        eve_prepare(RawKey::from_bits(i_a), bases_a, 0.0, ctx.eve_rng),
        ChannelParams{0.0, spec_.eve_flip_prob});
    if (b_replies.empty()) return;
    Envelope s2 = std::move(b_replies[0]);  // Bob's nonce; Eve keeps it

    Envelope s3p(s3.msg);  // identical bases message
    b_replies = eve.to_bob(s3p, true, 0, 0);
    if (ctx.bob.view().aborted || b_replies.empty()) return;
    Envelope s4 = std::move(b_replies[0]);
    const BitString mask_b = s4.msg.fields[0];
    BitString k_eb = apply_mask(i_a, mask_b);

    // Eve's own reconciliation block toward Bob.
    const EcCode& code = default_code();
    std::uint64_t co_point = ctx.eve_rng.next_u64() & 0xffffffffULL;
    auto [syn, co] = reconciliation_data(code, co_point, k_eb);
    Envelope p1p(build_ec_message(shape.id, code.index(), syn, co_point, co));
    auto from_bob = eve.to_bob(p1p, true, 0, 0);
    if (ctx.bob.view().aborted || from_bob.empty()) return;
    Envelope p2 = std::move(from_bob[0]);  // status + Bob's transcript tag

    // Answer Alice: a mask whose message group collides with Bob's.
    std::uint64_t target;
    BitString search_prefix, search_suffix;
    {
      BitString pre = p2.nonce ? *p2.nonce : BitString();
      BitString whole = pre;
      whole.append(transcript_bits(ctx.bob.transcript_to_alice()));
      target = public_hash_uint(eve.f, whole);
      // Alice's view: her received nonce frame, the mask frame, then the
      // status frame Eve will forward unchanged.
      search_prefix = pre;
      search_prefix.append(transcript_bits(ctx.alice.transcript_to_alice()));
      auto status_frame = encode_frame(p2.msg);
      search_suffix = BitString::from_bytes(status_frame, status_frame.size() * 8);
    }
    Envelope s4p;
    unsigned w = 0;
    std::uint64_t c = 0;
    if (eve.can_forge) {
      WireMessage mask_msg = s4.msg;
      MutationSpace space;
      space.base_message = mask_msg;
      space.mutable_field = 0;
      space.mutable_positions = all_positions(mask_msg.fields[0].size());
      space.w_max = spec_.w_max;
      auto res = find_colliding_message(space, target, eve.f, search_prefix, search_suffix);
      c = res.candidates_tested;
      if (!res.found) {
        eve.finish(BitString(), k_eb, std::nullopt, std::nullopt);
        return;
      }
      w = res.weight_used;
      s4p = Envelope(std::move(res.message));
    } else {
      s4p = Envelope(s4.msg);
    }
    auto a2 = eve.to_alice(s4p, true, w, c);
    if (ctx.alice.view().aborted || a2.empty()) {
      eve.finish(BitString(), k_eb, std::nullopt, std::nullopt);
      return;
    }
    const BitString mask_for_alice = s4p.msg.fields[0];
    BitString k_a = apply_mask(i_a, mask_for_alice);
    Envelope p1 = std::move(a2[0]);  // Alice's block: Eve already holds k_a

    // Forward Bob's status (with his tag) to Alice.
    auto a3 = eve.to_alice(p2, true, 0, 0);
    if (ctx.alice.view().aborted || a3.empty()) {
      eve.finish(k_a, k_eb, std::nullopt, std::nullopt);
      return;
    }
    Envelope p3 = std::move(a3[0]);
    PaSpec alice_pa;
    alice_pa.out_len = static_cast<std::uint32_t>(p3.msg.fields[0].read_uint(0, 32));
    alice_pa.seed = p3.msg.fields[1];
    BitString key_a = pa_apply(alice_pa, k_a);

    // Final message to Bob: PA description colliding with Alice's group.
    std::uint64_t target2;
    BitString prefix2;
    {
      BitString pre = p3.nonce ? *p3.nonce : BitString();
      BitString whole = pre;
      whole.append(transcript_bits(ctx.alice.transcript_to_bob()));
      target2 = public_hash_uint(eve.f, whole);
      prefix2 = pre;
      prefix2.append(transcript_bits(ctx.bob.transcript_to_bob()));
    }
    Envelope p3p;
    std::uint64_t c2 = 0;
    if (eve.can_forge) {
      auto res = forge_pa_message(eve, shape.id, k_eb, key_a, target2, prefix2, BitString(),
                                  spec_.max_candidates, ctx.eve_rng.next_u64());
      c2 = res.cands;
      if (!res.found) {
        eve.finish(k_a, k_eb, key_a, std::nullopt);
        return;
      }
      p3p = Envelope(std::move(res.msg));
    } else {
      PaSpec cand;
      cand.out_len = alice_pa.out_len;
      cand.seed =
          cand.out_len ? prg_bits(ctx.eve_rng.next_u64(), 0, k_eb.size() + cand.out_len - 1)
                       : BitString();
      p3p = Envelope(build_pa_message(shape.id, cand));
    }
    p3p.tag = p3.tag;
    p3p.nonce = p3.nonce;
    eve.to_bob(p3p, true, 0, c2);

    PaSpec delivered;
    delivered.out_len = static_cast<std::uint32_t>(p3p.msg.fields[0].read_uint(0, 32));
    delivered.seed = p3p.msg.fields[1];
    std::optional<BitString> key_eb_final;
    if (!ctx.bob.view().aborted) key_eb_final = pa_apply(delivered, k_eb);
    eve.finish(k_a, k_eb, key_a, std::move(key_eb_final));
  }

 private:
  AttackSpec spec_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Factory and naming.

bool attack_requires_qm(const AttackSpec& spec) {
  switch (spec.kind) {
    case AttackKind::InterleaveQm:
    case AttackKind::OneSidedQm:
    case AttackKind::BidirectionalQm:
    case AttackKind::NoP3P1:
    case AttackKind::NoP3P2:
    case AttackKind::OtpQm:
      return true;
    case AttackKind::Matrix:
      return spec.qm;
    default:
      return false;
  }
}

ProtocolVariant attack_default_protocol(const AttackSpec& spec) {
  switch (spec.kind) {
    case AttackKind::None:
    case AttackKind::StraightforwardMitm:
    case AttackKind::InterleaveQm:
      return ProtocolVariant::P1;
    case AttackKind::OneSidedQm:
    case AttackKind::BidirectionalQm:
      return ProtocolVariant::P2;
    case AttackKind::InterceptResend:
      return ProtocolVariant::P3;
    case AttackKind::Matrix:
      if (!spec.row_bob_sends) return spec.delayed ? ProtocolVariant::P2 : ProtocolVariant::P1;
      return spec.delayed ? ProtocolVariant::P4 : ProtocolVariant::P3;
    case AttackKind::NoP3P1:
      return ProtocolVariant::P1NoP3;
    case AttackKind::NoP3P2:
      return ProtocolVariant::P2NoP3;
    case AttackKind::NoP3P3:
      return ProtocolVariant::P3NoP3;
    case AttackKind::OtpQm:
    case AttackKind::OtpGuess:
      return ProtocolVariant::P1OtpEc;
  }
  return ProtocolVariant::P1;
}

std::unique_ptr<AttackStrategyBase> make_attack(const AttackSpec& spec) {
  AttackSpec s = spec;
  switch (spec.kind) {
    case AttackKind::None:
      return nullptr;
    case AttackKind::StraightforwardMitm:
      return std::make_unique<StraightforwardMitmAttack>(s);
    case AttackKind::InterleaveQm:
    case AttackKind::NoP3P1:
    case AttackKind::OtpQm:
      s.row_bob_sends = false;
      s.qm = true;
      s.delayed = false;
      return std::make_unique<MatrixAttack>(s);
    case AttackKind::OneSidedQm:
    case AttackKind::NoP3P2:
      s.row_bob_sends = false;
      s.qm = true;
      s.delayed = true;
      s.blank_fraction = 0.0;
      return std::make_unique<MatrixAttack>(s);
    case AttackKind::BidirectionalQm:
      return std::make_unique<BidirectionalQmAttack>(s);
    case AttackKind::InterceptResend:
    case AttackKind::NoP3P3:
      s.row_bob_sends = true;
      s.qm = false;
      s.delayed = false;
      return std::make_unique<MatrixAttack>(s);
    case AttackKind::OtpGuess:
      s.row_bob_sends = false;
      s.qm = false;
      s.delayed = false;
      return std::make_unique<MatrixAttack>(s);
    case AttackKind::Matrix:
      if (!spec.qm) s.blank_fraction = 0.0;
      return std::make_unique<MatrixAttack>(s);
  }
  return nullptr;
}

std::optional<AttackSpec> attack_from_name(const std::string& name) {
  AttackSpec s;
  if (name == "none") { s.kind = AttackKind::None; return s; }
  if (name == "straightforward-mitm") { s.kind = AttackKind::StraightforwardMitm; return s; }
  if (name == "interleave-qm") { s.kind = AttackKind::InterleaveQm; return s; }
  if (name == "one-sided-qm") { s.kind = AttackKind::OneSidedQm; return s; }
  if (name == "bidirectional-qm") { s.kind = AttackKind::BidirectionalQm; return s; }
  if (name == "intercept-resend") { s.kind = AttackKind::InterceptResend; return s; }
  if (name == "nop3-p1") { s.kind = AttackKind::NoP3P1; return s; }
  if (name == "nop3-p2") { s.kind = AttackKind::NoP3P2; return s; }
  if (name == "nop3-p3") { s.kind = AttackKind::NoP3P3; return s; }
  if (name == "otp-qm") { s.kind = AttackKind::OtpQm; return s; }
  if (name == "otp-guess") { s.kind = AttackKind::OtpGuess; return s; }
  if (name.rfind("matrix-", 0) == 0) {
    std::string rest = name.substr(7);
    s.kind = AttackKind::Matrix;
    if (rest.rfind("a-", 0) == 0) s.row_bob_sends = false;
    else if (rest.rfind("b-", 0) == 0) s.row_bob_sends = true;
    else return std::nullopt;
    rest = rest.substr(2);
    if (rest.rfind("qm-", 0) == 0) { s.qm = true; rest = rest.substr(3); }
    else if (rest.rfind("noqm-", 0) == 0) { s.qm = false; rest = rest.substr(5); }
    else return std::nullopt;
    if (rest == "imm") s.delayed = false;
    else if (rest == "del") s.delayed = true;
    else return std::nullopt;
    return s;
  }
  return std::nullopt;
}

std::string attack_name(const AttackSpec& spec) {
  switch (spec.kind) {
    case AttackKind::None: return "none";
    case AttackKind::StraightforwardMitm: return "straightforward-mitm";
    case AttackKind::InterleaveQm: return "interleave-qm";
    case AttackKind::OneSidedQm: return "one-sided-qm";
    case AttackKind::BidirectionalQm: return "bidirectional-qm";
    case AttackKind::InterceptResend: return "intercept-resend";
    case AttackKind::NoP3P1: return "nop3-p1";
    case AttackKind::NoP3P2: return "nop3-p2";
    case AttackKind::NoP3P3: return "nop3-p3";
    case AttackKind::OtpQm: return "otp-qm";
    case AttackKind::OtpGuess: return "otp-guess";
    case AttackKind::Matrix:
      return std::string("matrix-") + (spec.row_bob_sends ? "b-" : "a-") +
             (spec.qm ? "qm-" : "noqm-") + (spec.delayed ? "del" : "imm");
  }
  return "?";
}

}  // namespace qkdlab
