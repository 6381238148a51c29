#include "qkdlab/protocol.hpp"

#include <deque>
#include <stdexcept>

namespace qkdlab {

namespace {

constexpr unsigned kConfirmWidth = 32;
constexpr std::uint8_t kAckMarker = 0xa5;
constexpr std::uint64_t kPoolRole = 0x01, kAliceRole = 0x02, kBobRole = 0x03, kPublicRole = 0x04,
                        kEveRole = 0x05;

std::uint16_t encode_eps(double eps) {
  if (eps <= 0.0) return 0;
  double v = eps * 65536.0 + 0.5;
  if (v >= 65535.0) return 65535;
  return static_cast<std::uint16_t>(v);
}

double decode_eps(std::uint16_t v) { return static_cast<double>(v) / 65536.0; }

}  // namespace

const char* protocol_name(ProtocolVariant v) {
  switch (v) {
    case ProtocolVariant::P1: return "1";
    case ProtocolVariant::P2: return "2";
    case ProtocolVariant::P3: return "3";
    case ProtocolVariant::P1NoP3: return "1-noP3";
    case ProtocolVariant::P2NoP3: return "2-noP3";
    case ProtocolVariant::P3NoP3: return "3-noP3";
    case ProtocolVariant::P1OtpEc: return "1-otpEC";
    case ProtocolVariant::P4: return "4";
  }
  return "?";
}

std::optional<ProtocolVariant> protocol_from_name(const std::string& name) {
  for (auto v : {ProtocolVariant::P1, ProtocolVariant::P2, ProtocolVariant::P3,
                 ProtocolVariant::P1NoP3, ProtocolVariant::P2NoP3, ProtocolVariant::P3NoP3,
                 ProtocolVariant::P1OtpEc, ProtocolVariant::P4})
    if (name == protocol_name(v)) return v;
  return std::nullopt;
}

ProtocolShape protocol_shape(ProtocolVariant v) {
  ProtocolShape s;
  switch (v) {
    case ProtocolVariant::P1:
      s = {1, false, false, true, false, 6, 6};
      break;
    case ProtocolVariant::P2:
      s = {2, false, true, true, false, 6, 2};
      break;
    case ProtocolVariant::P3:
      s = {3, true, false, true, false, 5, 5};
      break;
    case ProtocolVariant::P1NoP3:
      s = {4, false, false, false, false, 5, 5};
      break;
    case ProtocolVariant::P2NoP3:
      s = {5, false, true, false, false, 5, 2};
      break;
    case ProtocolVariant::P3NoP3:
      s = {6, true, false, false, false, 4, 4};
      break;
    case ProtocolVariant::P1OtpEc:
      s = {7, false, false, true, true, 6, 6};
      break;
    case ProtocolVariant::P4:
      s = {8, true, true, true, false, 5, 2};
      break;
  }
  return s;
}

BitString sift_mask(const BasisString& bases_a, const BasisString& bases_b,
                    const BitString& presence_b) {
  if (bases_a.size() != bases_b.size() || bases_a.size() != presence_b.size())
    throw std::invalid_argument("sift inputs must share one length");
  BitString mask(bases_a.size());
  for (std::size_t k = 0; k < bases_a.size(); ++k)
    mask.set(k, presence_b.get(k) && bases_a.get(k) == bases_b.get(k));
  return mask;
}

BitString apply_mask(const BitString& bits, const BitString& mask) {
  if (bits.size() != mask.size()) throw std::invalid_argument("mask length mismatch");
  BitString out;
  for (std::size_t k = 0; k < bits.size(); ++k)
    if (mask.get(k)) out.push_back(bits.get(k));
  return out;
}

const char* abort_reason_name(AbortReason r) {
  switch (r) {
    case AbortReason::None: return "none";
    case AbortReason::TagInvalid: return "tag-invalid";
    case AbortReason::ConfirmMismatch: return "confirm-mismatch";
    case AbortReason::PeerFail: return "peer-fail";
    case AbortReason::LengthMismatch: return "length-mismatch";
    case AbortReason::ProtocolOrder: return "protocol-order";
  }
  return "?";
}

const char* final_relation_name(FinalRelation r) {
  switch (r) {
    case FinalRelation::None: return "none";
    case FinalRelation::AllEqual: return "all-equal";
    case FinalRelation::SeparateWorlds: return "separate-worlds";
    case FinalRelation::BobSideOnly: return "bob-side-only";
    case FinalRelation::Aborted: return "aborted";
  }
  return "?";
}

SessionKeys draw_session_keys(const ProtocolShape& shape, const AuthScheme& auth,
                              KeyLedger& ledger, Rng& public_rng) {
  SessionKeys keys;
  for (unsigned i = 0; i < shape.tag_count; ++i) {
    keys.message_keys.push_back(draw_message_key(auth, ledger));
    keys.nonces.push_back(auth.needs_nonce() ? public_rng.bits(64) : BitString());
  }
  return keys;
}

std::size_t session_key_budget(const ProtocolShape& shape, const AuthScheme& auth,
                               std::size_t n_slots) {
  std::size_t budget = shape.tag_count * tag_key_cost(auth);
  if (shape.otp_syndrome) budget += 2 * ((n_slots / 16 + 2) * 12 + 64);
  return budget;
}

// ---------------------------------------------------------------------------
// PartyBase

PartyBase::PartyBase(bool is_alice, ProtocolVariant variant, const AuthScheme& auth,
                     const SessionKeys& keys, std::size_t n_slots, std::uint64_t rng_seed)
    : is_alice_(is_alice),
      variant_(variant),
      shape_(protocol_shape(variant)),
      auth_(auth),
      keys_(keys),
      n_(n_slots),
      rng_(rng_seed) {}

unsigned PartyBase::message_index(MsgType t) const {
  if (!shape_.bob_sends_bases) {
    switch (t) {
      case MsgType::Ack:
      case MsgType::Nonce: return 0;
      case MsgType::BasesA: return 1;
      case MsgType::SiftMaskMsg: return 2;
      case MsgType::EcBlock: return 3;
      case MsgType::Status: return 4;
      case MsgType::PaSpecMsg: return 5;
      default: break;
    }
  } else {
    switch (t) {
      case MsgType::BasesB: return 0;
      case MsgType::SiftMaskMsg: return 1;
      case MsgType::EcBlock: return 2;
      case MsgType::Status: return 3;
      case MsgType::PaSpecMsg: return 4;
      default: break;
    }
  }
  throw ProtocolOrderError("message type not part of this protocol");
}

Tag PartyBase::delayed_tag(unsigned key_index, const std::vector<std::uint8_t>& transcript) const {
  BitString msg = BitString::from_bytes(transcript, transcript.size() * 8);
  const auto& mk = keys_.message_keys.at(key_index);
  std::optional<BitString> per = mk.per_message;
  if (auth_.needs_nonce()) per = keys_.nonces.at(key_index);
  return two_step_tag(auth_, mk.su2, msg, per);
}

Envelope PartyBase::sealed(WireMessage msg) {
  msg.protocol_id = shape_.id;
  Envelope env(std::move(msg));
  auto frame = encode_frame(env.msg);
  bool a_to_b = is_alice_;
  auto& transcript = a_to_b ? sent_transcript_a_ : sent_transcript_b_;
  transcript.insert(transcript.end(), frame.begin(), frame.end());

  if (!shape_.delayed_auth) {
    unsigned idx = message_index(env.msg.msg_type);
    const auto& mk = keys_.message_keys.at(idx);
    std::optional<BitString> per = mk.per_message;
    if (auth_.needs_nonce()) {
      per = keys_.nonces.at(idx);
      env.nonce = per;
    }
    env.tag = two_step_tag(auth_, mk.su2, frame_bits(env.msg), per);
  } else {
    // Delayed schedule: the B->A direction is tagged on Status, the A->B
    // direction on PaSpec (or on EcBlock when there is no PA message).
    bool tagged = (!a_to_b && env.msg.msg_type == MsgType::Status) ||
                  (a_to_b && shape_.pa_message && env.msg.msg_type == MsgType::PaSpecMsg) ||
                  (a_to_b && !shape_.pa_message && env.msg.msg_type == MsgType::EcBlock);
    if (tagged) {
      unsigned key_index = a_to_b ? 1 : 0;
      env.tag = delayed_tag(key_index, transcript);
      if (auth_.needs_nonce()) env.nonce = keys_.nonces.at(key_index);
    }
  }
  return env;
}

bool PartyBase::tag_valid(const Envelope& env, unsigned msg_index) const {
  if (!env.tag) return false;
  const auto& mk = keys_.message_keys.at(msg_index);
  std::optional<BitString> per = mk.per_message;
  if (auth_.needs_nonce()) {
    if (!env.nonce) return false;
    per = env.nonce;  // as received: malleable in transit by design
  }
  Tag expect = two_step_tag(auth_, mk.su2, frame_bits(env.msg), per);
  return expect == *env.tag;
}

bool PartyBase::accept_incoming(const Envelope& env, unsigned msg_index) {
  bool a_to_b = !is_alice_;  // direction of the incoming message
  auto frame = encode_frame(env.msg);
  auto& transcript = a_to_b ? sent_transcript_a_ : sent_transcript_b_;
  transcript.insert(transcript.end(), frame.begin(), frame.end());

  if (!shape_.delayed_auth) {
    if (!tag_valid(env, msg_index)) {
      abort(AbortReason::TagInvalid);
      return false;
    }
    return true;
  }
  bool tagged = (!a_to_b && env.msg.msg_type == MsgType::Status) ||
                (a_to_b && shape_.pa_message && env.msg.msg_type == MsgType::PaSpecMsg) ||
                (a_to_b && !shape_.pa_message && env.msg.msg_type == MsgType::EcBlock);
  if (!tagged) return true;
  unsigned key_index = a_to_b ? 1 : 0;
  if (!env.tag) {
    abort(AbortReason::TagInvalid);
    return false;
  }
  const auto& mk = keys_.message_keys.at(key_index);
  std::optional<BitString> per = mk.per_message;
  if (auth_.needs_nonce()) {
    if (!env.nonce) {
      abort(AbortReason::TagInvalid);
      return false;
    }
    per = env.nonce;
  }
  BitString msg = BitString::from_bytes(transcript, transcript.size() * 8);
  Tag expect = two_step_tag(auth_, mk.su2, msg, per);
  if (!(expect == *env.tag)) {
    abort(AbortReason::TagInvalid);
    return false;
  }
  return true;
}

void PartyBase::abort(AbortReason r) {
  view_.aborted = true;
  view_.abort_reason = r;
}

// ---------------------------------------------------------------------------
// Transcript-derived privacy amplification (the no-P3 rule): expand the
// public mixer over both direction transcripts.

PaSpec derive_transcript_pa(const std::vector<std::uint8_t>& dir_a,
                            const std::vector<std::uint8_t>& dir_b, std::size_t key_len,
                            double eps) {
  std::uint32_t r = pa_output_length(key_len, eps);
  PaSpec spec;
  spec.out_len = r;
  if (r == 0) return spec;
  MixerState m(kDefaultMixerSeed);
  std::vector<std::uint8_t> all = dir_a;
  all.insert(all.end(), dir_b.begin(), dir_b.end());
  std::size_t nblocks = (all.size() + 7) / 8;
  for (std::size_t i = 0; i < nblocks; ++i) m.absorb_block(packed_block(all, i));
  std::uint64_t base = m.finalize(all.size() * 8);
  std::size_t seed_len = key_len + r - 1;
  BitString seed(seed_len);
  for (std::size_t i = 0; i < seed_len; ++i) {
    std::uint64_t w = mix64(base ^ (i / 64 + 1) * kSeedGamma);
    seed.set(i, (w >> (63 - i % 64)) & 1);
  }
  spec.seed = std::move(seed);
  return spec;
}

// ---------------------------------------------------------------------------
// AliceMachine

AliceMachine::AliceMachine(ProtocolVariant variant, const AuthScheme& auth,
                           const SessionKeys& keys, std::size_t n_slots, std::uint64_t rng_seed)
    : PartyBase(true, variant, auth, keys, n_slots, rng_seed) {}

QuantumFrame AliceMachine::emit_quantum() {
  if (st_ != St::Start) throw ProtocolOrderError("quantum emission happens first");
  view_.raw = RawKey::from_bits(rng_.bits(n_));
  view_.bases = rng_.bits(n_);
  view_.presence = BitString(n_);
  for (std::size_t k = 0; k < n_; ++k) view_.presence.set(k, true);
  st_ = shape_.bob_sends_bases ? St::AwaitBases : St::AwaitAck;
  return prepare(view_.raw, view_.bases);
}

const EcCode& AliceMachine::chosen_code() const { return published_codes().at(code_index_ - 1); }

std::vector<Envelope> AliceMachine::send_bases() {
  WireMessage msg;
  msg.msg_type = MsgType::BasesA;
  msg.fields = {view_.bases};
  st_ = St::AwaitMask;
  return {sealed(std::move(msg))};
}

std::vector<Envelope> AliceMachine::send_ec_block() {
  code_index_ = default_code().index();
  const EcCode& code = chosen_code();
  co_.width = kConfirmWidth;
  co_.point = rng_.next_u64() & 0xffffffffULL;

  auto perm = ec_interleaver(view_.sifted.size());
  BitString syn = code.syndrome(ec_permute(view_.sifted, perm));
  if (shape_.otp_syndrome) {
    otp_pad_ = otp_ledger_.take(syn.size(), "otp");
    syn ^= otp_pad_;
  }
  view_.reconciled = view_.sifted;

  WireMessage msg;
  msg.msg_type = MsgType::EcBlock;
  msg.fields = {BitString::from_uint(code_index_, 8), syn,
                BitString::from_uint(co_.point, kConfirmWidth),
                confirm(co_, view_.sifted)};
  st_ = St::AwaitStatus;
  return {sealed(std::move(msg))};
}

std::vector<Envelope> AliceMachine::handle_status(const Envelope& env) {
  if (env.msg.fields.size() != 2) { abort(AbortReason::LengthMismatch); return {}; }
  bool fail = env.msg.fields[0].read_uint(0, 8) != 0;
  if (fail) {
    abort(AbortReason::PeerFail);
    return {};
  }
  view_.reported_eps = decode_eps(static_cast<std::uint16_t>(env.msg.fields[1].read_uint(0, 16)));
  st_ = St::Done;
  view_.finished = true;
  if (shape_.pa_message) {
    std::uint32_t r = pa_output_length(view_.sifted.size(), view_.reported_eps);
    PaSpec spec;
    spec.out_len = r;
    spec.seed = r ? rng_.bits(view_.sifted.size() + r - 1) : BitString();
    pa_ = spec;
    view_.final_key = pa_apply(spec, view_.sifted);
    WireMessage msg;
    msg.msg_type = MsgType::PaSpecMsg;
    msg.fields = {BitString::from_uint(r, 32), spec.seed};
    return {sealed(std::move(msg))};
  }
  pa_ = derive_transcript_pa(sent_transcript_a_, sent_transcript_b_, view_.sifted.size(),
                             view_.reported_eps);
  view_.final_key = pa_apply(*pa_, view_.sifted);
  return {};
}

std::vector<Envelope> AliceMachine::on_message(const Envelope& env) {
  if (done()) return {};
  switch (st_) {
    case St::AwaitAck: {
      MsgType want = shape_.delayed_auth ? MsgType::Nonce : MsgType::Ack;
      if (env.msg.msg_type != want) throw ProtocolOrderError("expected the acknowledgement");
      if (!accept_incoming(env, 0)) return {};
      return send_bases();
    }
    case St::AwaitMask: {
      if (env.msg.msg_type != MsgType::SiftMaskMsg)
        throw ProtocolOrderError("expected the sift mask");
      if (!accept_incoming(env, message_index(env.msg.msg_type))) return {};
      if (env.msg.fields.size() != 1 || env.msg.fields[0].size() != n_) {
        abort(AbortReason::LengthMismatch);
        return {};
      }
      view_.sift_maskv = env.msg.fields[0];
      view_.sifted = apply_mask(view_.raw.to_bits(), view_.sift_maskv);
      return send_ec_block();
    }
    case St::AwaitBases: {
      if (env.msg.msg_type != MsgType::BasesB)
        throw ProtocolOrderError("expected the measurement bases");
      if (!accept_incoming(env, 0)) return {};
      if (env.msg.fields.size() != 2 || env.msg.fields[0].size() != n_ ||
          env.msg.fields[1].size() != n_) {
        abort(AbortReason::LengthMismatch);
        return {};
      }
      view_.sift_maskv = sift_mask(view_.bases, env.msg.fields[0], env.msg.fields[1]);
      view_.sifted = apply_mask(view_.raw.to_bits(), view_.sift_maskv);
      WireMessage mask_msg;
      mask_msg.msg_type = MsgType::SiftMaskMsg;
      mask_msg.fields = {view_.sift_maskv};
      auto first = sealed(std::move(mask_msg));
      auto rest = send_ec_block();
      std::vector<Envelope> out;
      out.push_back(std::move(first));
      for (auto& e : rest) out.push_back(std::move(e));
      return out;
    }
    case St::AwaitStatus: {
      if (env.msg.msg_type != MsgType::Status) throw ProtocolOrderError("expected the status");
      if (!accept_incoming(env, message_index(env.msg.msg_type))) return {};
      return handle_status(env);
    }
    default:
      throw ProtocolOrderError("no message expected now");
  }
}

// ---------------------------------------------------------------------------
// BobMachine

BobMachine::BobMachine(ProtocolVariant variant, const AuthScheme& auth, const SessionKeys& keys,
                       std::size_t n_slots, std::uint64_t rng_seed)
    : PartyBase(false, variant, auth, keys, n_slots, rng_seed) {}

std::vector<Envelope> BobMachine::on_quantum(QuantumFrame frame, const ChannelParams& params) {
  if (st_ != St::AwaitQuantum) throw ProtocolOrderError("quantum state arrives first");
  if (frame.size() != n_) { abort(AbortReason::LengthMismatch); return {}; }
  view_.bases = rng_.bits(n_);
  view_.raw = measure(frame, view_.bases, params, rng_);
  view_.presence = view_.raw.presence();
  // withhold the basis choice where no result registered
  for (std::size_t k = 0; k < n_; ++k)
    if (!view_.presence.get(k)) view_.bases.set(k, false);

  WireMessage msg;
  if (shape_.bob_sends_bases) {
    msg.msg_type = MsgType::BasesB;
    msg.fields = {view_.bases, view_.presence};
    st_ = St::AwaitBases;  // awaiting the mask back
  } else {
    msg.msg_type = shape_.delayed_auth ? MsgType::Nonce : MsgType::Ack;
    msg.fields = {shape_.delayed_auth ? rng_.bits(64) : BitString::from_uint(kAckMarker, 8)};
    st_ = St::AwaitBases;
  }
  return {sealed(std::move(msg))};
}

std::vector<Envelope> BobMachine::handle_ec_block(const Envelope& env) {
  if (env.msg.fields.size() != 4) { abort(AbortReason::LengthMismatch); return {}; }
  unsigned code_index = static_cast<unsigned>(env.msg.fields[0].read_uint(0, 8));
  if (code_index < 1 || code_index > published_codes().size()) {
    abort(AbortReason::LengthMismatch);
    return {};
  }
  const EcCode& code = published_codes()[code_index - 1];
  std::size_t m = view_.sifted.size();
  std::size_t expect_syn = ((m + code.block_len() - 1) / code.block_len()) * code.syndrome_len();
  BitString syn = env.msg.fields[1];
  if (syn.size() != expect_syn) { abort(AbortReason::LengthMismatch); return {}; }
  if (shape_.otp_syndrome) syn ^= otp_ledger_.take(syn.size(), "otp");

  ConfirmSpec co{kConfirmWidth, env.msg.fields[2].read_uint(0, kConfirmWidth)};
  auto perm = ec_interleaver(m);
  BitString corrected = ec_unpermute(code.correct(ec_permute(view_.sifted, perm), syn), perm);

  WireMessage msg;
  msg.msg_type = MsgType::Status;
  if (confirm(co, corrected) != env.msg.fields[3]) {
    msg.fields = {BitString::from_uint(1, 8), BitString::from_uint(0xffff, 16)};
    auto out = sealed(std::move(msg));
    abort(AbortReason::ConfirmMismatch);
    return {std::move(out)};
  }
  view_.reconciled = corrected;
  double eps = m == 0 ? 0.0
                      : static_cast<double>(view_.sifted.hamming_distance(corrected)) /
                            static_cast<double>(m);
  std::uint16_t eps16 = encode_eps(eps);
  view_.reported_eps = decode_eps(eps16);
  msg.fields = {BitString::from_uint(0, 8), BitString::from_uint(eps16, 16)};
  auto out = sealed(std::move(msg));
  if (shape_.pa_message) {
    st_ = St::AwaitPa;
  } else {
    derive_local_pa();
    st_ = St::Done;
    view_.finished = true;
  }
  return {std::move(out)};
}

void BobMachine::derive_local_pa() {
  PaSpec spec = derive_transcript_pa(sent_transcript_a_, sent_transcript_b_,
                                     view_.reconciled.size(), view_.reported_eps);
  view_.final_key = pa_apply(spec, view_.reconciled);
}

std::vector<Envelope> BobMachine::handle_pa(const Envelope& env) {
  if (env.msg.fields.size() != 2) { abort(AbortReason::LengthMismatch); return {}; }
  std::uint32_t r = static_cast<std::uint32_t>(env.msg.fields[0].read_uint(0, 32));
  PaSpec spec;
  spec.out_len = r;
  spec.seed = env.msg.fields[1];
  if (r != 0 && spec.seed.size() != view_.reconciled.size() + r - 1) {
    abort(AbortReason::LengthMismatch);
    return {};
  }
  view_.final_key = pa_apply(spec, view_.reconciled);
  st_ = St::Done;
  view_.finished = true;
  return {};
}

std::vector<Envelope> BobMachine::on_message(const Envelope& env) {
  if (done()) return {};
  switch (st_) {
    case St::AwaitBases: {
      if (!shape_.bob_sends_bases) {
        if (env.msg.msg_type != MsgType::BasesA)
          throw ProtocolOrderError("expected the preparation bases");
        if (!accept_incoming(env, message_index(env.msg.msg_type))) return {};
        if (env.msg.fields.size() != 1 || env.msg.fields[0].size() != n_) {
          abort(AbortReason::LengthMismatch);
          return {};
        }
        view_.sift_maskv = sift_mask(env.msg.fields[0], view_.bases, view_.presence);
        view_.sifted = BitString();
        for (std::size_t k = 0; k < n_; ++k)
          if (view_.sift_maskv.get(k)) view_.sifted.push_back(view_.raw.bit(k));
        WireMessage msg;
        msg.msg_type = MsgType::SiftMaskMsg;
        msg.fields = {view_.sift_maskv};
        st_ = St::AwaitEc;
        return {sealed(std::move(msg))};
      }
      if (env.msg.msg_type != MsgType::SiftMaskMsg)
        throw ProtocolOrderError("expected the sift mask");
      if (!accept_incoming(env, message_index(env.msg.msg_type))) return {};
      if (env.msg.fields.size() != 1 || env.msg.fields[0].size() != n_) {
        abort(AbortReason::LengthMismatch);
        return {};
      }
      view_.sift_maskv = env.msg.fields[0];
      // a mask may only select slots that produced a result
      for (std::size_t k = 0; k < n_; ++k)
        if (view_.sift_maskv.get(k) && !view_.presence.get(k)) {
          abort(AbortReason::LengthMismatch);
          return {};
        }
      view_.sifted = BitString();
      for (std::size_t k = 0; k < n_; ++k)
        if (view_.sift_maskv.get(k)) view_.sifted.push_back(view_.raw.bit(k));
      st_ = St::AwaitEc;
      return {};
    }
    case St::AwaitEc: {
      if (env.msg.msg_type != MsgType::EcBlock)
        throw ProtocolOrderError("expected the reconciliation block");
      if (!accept_incoming(env, message_index(env.msg.msg_type))) return {};
      return handle_ec_block(env);
    }
    case St::AwaitPa: {
      if (env.msg.msg_type != MsgType::PaSpecMsg)
        throw ProtocolOrderError("expected the privacy-amplification description");
      if (!accept_incoming(env, message_index(env.msg.msg_type))) return {};
      return handle_pa(env);
    }
    default:
      throw ProtocolOrderError("no message expected now");
  }
}

// ---------------------------------------------------------------------------
// Classification and the session driver

namespace {

enum class Rel { Equal, Approx, Far };

Rel relate(const BitString& x, const BitString& y) {
  if (x.size() != y.size() || x.size() == 0) return Rel::Far;
  std::size_t d = x.hamming_distance(y);
  if (d == 0) return Rel::Equal;
  return (static_cast<double>(d) / static_cast<double>(x.size()) <= 0.125) ? Rel::Approx
                                                                           : Rel::Far;
}

}  // namespace

int classify_correlation(const BitString& k_a, const BitString& k_ea, const BitString& k_eb,
                         const BitString& k_b, bool delayed_auth) {
  // The boxed patterns distinguish (i) whether Eve holds Alice's key, (ii)
  // whether she holds Bob's, and (iii) whether the two ends stayed mutually
  // correlated. Under the one-sided attacks Eve's two copies coincide as
  // strings, so the chain is classified through the end-to-end relation.
  bool alice_held = relate(k_a, k_ea) != Rel::Far;
  bool bob_held = relate(k_eb, k_b) != Rel::Far;
  bool ends_close = relate(k_a, k_b) != Rel::Far;
  if (alice_held && bob_held && ends_close) return 1;
  if (alice_held && bob_held) return delayed_auth ? 2 : 3;
  if (!alice_held && bob_held) return 4;
  return 0;
}

double matching_bases_qber(const PartyView& alice, const PartyView& bob) {
  std::size_t n = alice.bases.size();
  std::size_t both = 0, diff = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!bob.presence.get(k)) continue;
    if (alice.bases.get(k) != bob.bases.get(k)) continue;
    ++both;
    if (alice.raw.bit(k) != bob.raw.bit(k)) ++diff;
  }
  return both == 0 ? 0.0 : static_cast<double>(diff) / static_cast<double>(both);
}

SessionOutcome run_protocol(const SessionConfig& config, AttackStrategyBase* adversary) {
  ProtocolShape shape = protocol_shape(config.variant);
  Rng pool_rng(derive_seed(config.seed, kPoolRole));
  Rng public_rng(derive_seed(config.seed, kPublicRole));
  KeyLedger ledger(pool_rng.bits(session_key_budget(shape, config.auth, config.n_slots)));
  SessionKeys keys = draw_session_keys(shape, config.auth, ledger, public_rng);

  AliceMachine alice(config.variant, config.auth, keys, config.n_slots,
                     derive_seed(config.seed, kAliceRole));
  BobMachine bob(config.variant, config.auth, keys, config.n_slots,
                 derive_seed(config.seed, kBobRole));
  alice.set_otp_ledger(ledger);  // both copies sit at the same cursor
  bob.set_otp_ledger(std::move(ledger));

  SessionOutcome outcome;

  if (adversary) {
    Rng eve_rng(derive_seed(config.seed, kEveRole));
    AttackContext ctx{config, alice, bob, eve_rng, outcome};
    adversary->run(ctx);
  } else {
    std::deque<std::pair<bool, Envelope>> queue;  // first = to bob
    auto frame = alice.emit_quantum();
    for (auto& e : bob.on_quantum(std::move(frame), config.channel)) queue.emplace_back(false, std::move(e));
    while (!queue.empty()) {
      auto [to_bob, env] = std::move(queue.front());
      queue.pop_front();
      auto replies = to_bob ? bob.on_message(env) : alice.on_message(env);
      for (auto& e : replies) queue.emplace_back(!to_bob, std::move(e));
    }
  }

  const PartyView& av = alice.view();
  const PartyView& bv = bob.view();
  outcome.key_a = av.final_key;
  outcome.key_b = bv.final_key;
  outcome.sifted_a = av.sifted;
  outcome.sifted_b = bv.sifted;
  outcome.qber_observed = matching_bases_qber(av, bv);
  outcome.key_bits_consumed = shape.tag_count * tag_key_cost(config.auth) +
                              (shape.otp_syndrome && !av.sifted.empty()
                                   ? ((av.sifted.size() + 15) / 16) * 12
                                   : 0);
  outcome.tags_consumed = shape.tag_count;
  if (av.aborted && av.abort_reason != AbortReason::PeerFail) {
    outcome.abort_by = "alice";
    outcome.abort_reason = av.abort_reason;
  } else if (bv.aborted && bv.abort_reason != AbortReason::PeerFail) {
    outcome.abort_by = "bob";
    outcome.abort_reason = bv.abort_reason;
  } else if (av.aborted || bv.aborted) {
    outcome.abort_by = av.aborted ? "alice" : "bob";
    outcome.abort_reason = AbortReason::PeerFail;
  }

  if (!outcome.correlation_case && !outcome.sifted_e_alice_side.empty())
    outcome.correlation_case =
        classify_correlation(outcome.sifted_a, outcome.sifted_e_alice_side,
                             outcome.sifted_e_bob_side, outcome.sifted_b, shape.delayed_auth);

  if (outcome.abort_by) {
    outcome.final_relation = FinalRelation::Aborted;
  } else if (outcome.key_a && outcome.key_b) {
    const auto& ka = *outcome.key_a;
    const auto& kb = *outcome.key_b;
    const auto& ea = outcome.key_e_alice_side;
    const auto& eb = outcome.key_e_bob_side;
    if (ka == kb && ((ea && *ea == ka) || (eb && *eb == kb)))
      outcome.final_relation = FinalRelation::AllEqual;
    else if (!(ka == kb) && ea && eb && *ea == ka && *eb == kb)
      outcome.final_relation = FinalRelation::SeparateWorlds;
    else if (!(ka == kb) && eb && *eb == kb)
      outcome.final_relation = FinalRelation::BobSideOnly;
    else
      outcome.final_relation = FinalRelation::None;
  }
  if (outcome.goal_relation != FinalRelation::None)
    outcome.attack_goal_met = outcome.final_relation == outcome.goal_relation;
  return outcome;
}

}  // namespace qkdlab
