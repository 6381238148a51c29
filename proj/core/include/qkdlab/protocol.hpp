#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qkdlab/auth.hpp"
#include "qkdlab/confirm_pa.hpp"
#include "qkdlab/key_ledger.hpp"
#include "qkdlab/linear_code.hpp"
#include "qkdlab/quantum.hpp"
#include "qkdlab/wire.hpp"

namespace qkdlab {

enum class ProtocolVariant {
  P1,        // immediate auth, Alice sends bases
  P2,        // delayed auth, Alice sends bases, nonce handshake
  P3,        // immediate auth, Bob sends bases
  P1NoP3,    // P1 with locally derived privacy amplification
  P2NoP3,    // P2 with locally derived PA; P1 carries the delayed tag
  P3NoP3,    // P3 with locally derived PA
  P1OtpEc,   // P1 with one-time-pad encrypted syndrome
  P4,        // delayed auth, Bob sends bases (attack-matrix shape)
};

const char* protocol_name(ProtocolVariant v);
std::optional<ProtocolVariant> protocol_from_name(const std::string& name);

/// Structural properties of a variant.
struct ProtocolShape {
  std::uint8_t id = 1;
  bool bob_sends_bases = false;
  bool delayed_auth = false;
  bool pa_message = true;   // false: PA seed derived from the transcript
  bool otp_syndrome = false;
  unsigned message_count = 0;  // classical messages
  unsigned tag_count = 0;      // tags (= su2 keys) consumed
};
ProtocolShape protocol_shape(ProtocolVariant v);

/// mask_k = 1 exactly where the (claimed) bases agree and a result exists.
BitString sift_mask(const BasisString& bases_a, const BasisString& bases_b,
                    const BitString& presence_b);
BitString apply_mask(const BitString& bits, const BitString& mask);

enum class AbortReason : std::uint8_t {
  None = 0,
  TagInvalid,
  ConfirmMismatch,
  PeerFail,
  LengthMismatch,
  ProtocolOrder,
};
const char* abort_reason_name(AbortReason r);

struct ProtocolOrderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything one party accumulated during a session; read by the harness,
/// the adversary and the tests.
struct PartyView {
  BasisString bases;
  BitString presence;       // all-ones for a party without loss
  RawKey raw;
  BitString sift_maskv;
  BitString sifted;
  BitString reconciled;     // post error correction (Bob); = sifted for Alice
  std::optional<BitString> final_key;
  double reported_eps = 0.0;
  bool aborted = false;
  AbortReason abort_reason = AbortReason::None;
  bool finished = false;
};

/// Per-message key material both parties pre-draw from the shared ledger in
/// the variant's fixed message order.
struct SessionKeys {
  std::vector<MessageKey> message_keys;
  std::vector<BitString> nonces;  // public per-message nonces (nonce rungs)
};
SessionKeys draw_session_keys(const ProtocolShape& shape, const AuthScheme& auth,
                              KeyLedger& ledger, Rng& public_rng);
std::size_t session_key_budget(const ProtocolShape& shape, const AuthScheme& auth,
                               std::size_t n_slots);

class AliceMachine;
class BobMachine;

/// Common machinery: tagging/verifying per the variant's schedule.
class PartyBase {
 public:
  PartyBase(bool is_alice, ProtocolVariant variant, const AuthScheme& auth,
            const SessionKeys& keys, std::size_t n_slots, std::uint64_t rng_seed);
  virtual ~PartyBase() = default;

  const PartyView& view() const { return view_; }
  PartyView& mutable_view() { return view_; }
  bool done() const { return view_.finished || view_.aborted; }
  const ProtocolShape& shape() const { return shape_; }
  void set_otp_ledger(KeyLedger ledger) { otp_ledger_ = std::move(ledger); }

  /// Frames seen so far per direction (A->B, B->A), as this party recorded
  /// them; the delayed tags cover exactly these concatenations.
  const std::vector<std::uint8_t>& transcript_to_bob() const { return sent_transcript_a_; }
  const std::vector<std::uint8_t>& transcript_to_alice() const { return sent_transcript_b_; }

 protected:
  Envelope sealed(WireMessage msg);
  bool tag_valid(const Envelope& env, unsigned msg_index) const;
  /// Immediate schedule: verify now; delayed: stash the frame for later.
  bool accept_incoming(const Envelope& env, unsigned msg_index);
  Tag delayed_tag(unsigned key_index, const std::vector<std::uint8_t>& transcript) const;
  void abort(AbortReason r);

  unsigned message_index(MsgType t) const;

  bool is_alice_;
  ProtocolVariant variant_;
  ProtocolShape shape_;
  AuthScheme auth_;
  SessionKeys keys_;
  std::size_t n_;
  Rng rng_;
  PartyView view_;
  KeyLedger otp_ledger_;
  std::vector<std::uint8_t> sent_transcript_a_;  // concatenated frames, A->B direction
  std::vector<std::uint8_t> sent_transcript_b_;  // B->A direction
};

class AliceMachine : public PartyBase {
 public:
  AliceMachine(ProtocolVariant variant, const AuthScheme& auth, const SessionKeys& keys,
               std::size_t n_slots, std::uint64_t rng_seed);

  /// Step one: make the raw key and bases, emit the signal string.
  QuantumFrame emit_quantum();
  std::vector<Envelope> on_message(const Envelope& env);

  const EcCode& chosen_code() const;
  const ConfirmSpec& confirm_spec() const { return co_; }
  const std::optional<PaSpec>& pa_spec() const { return pa_; }

 private:
  std::vector<Envelope> send_bases();
  std::vector<Envelope> send_ec_block();
  std::vector<Envelope> handle_status(const Envelope& env);

  enum class St { Start, AwaitAck, AwaitMask, AwaitBases, AwaitStatus, Done } st_ = St::Start;
  unsigned code_index_ = 0;
  ConfirmSpec co_;
  std::optional<PaSpec> pa_;
  BitString otp_pad_;
};

class BobMachine : public PartyBase {
 public:
  BobMachine(ProtocolVariant variant, const AuthScheme& auth, const SessionKeys& keys,
             std::size_t n_slots, std::uint64_t rng_seed);

  std::vector<Envelope> on_quantum(QuantumFrame frame, const ChannelParams& params);
  std::vector<Envelope> on_message(const Envelope& env);

 private:
  std::vector<Envelope> handle_ec_block(const Envelope& env);
  std::vector<Envelope> handle_pa(const Envelope& env);
  void derive_local_pa();

  enum class St { AwaitQuantum, AwaitBases, AwaitEc, AwaitPa, Done } st_ = St::AwaitQuantum;
};

/// Sift-stage correlation classes between the chain A / E-side-A / E-side-B / B.
/// 1: one well-correlated chain; 2: exact halves split in the middle;
/// 3: approximate halves split in the middle; 4: Alice isolated.
int classify_correlation(const BitString& k_a, const BitString& k_ea, const BitString& k_eb,
                         const BitString& k_b, bool delayed_auth);

enum class FinalRelation : std::uint8_t {
  None = 0,
  AllEqual,        // K^A = K^E = K^B
  SeparateWorlds,  // K^A = K^E_A != K^E_B = K^B
  BobSideOnly,     // K^A != K^E = K^B
  Aborted,
};
const char* final_relation_name(FinalRelation r);

struct TraceEvent {
  std::string direction;  // "A->B" or "B->A"
  MsgType type;
  bool forged = false;
  unsigned weight = 0;
  std::uint64_t candidates_tested = 0;
};

struct SessionOutcome {
  std::optional<BitString> key_a, key_b;
  std::optional<BitString> key_e_alice_side, key_e_bob_side;
  std::optional<std::string> abort_by;
  AbortReason abort_reason = AbortReason::None;
  int correlation_case = 0;  // 0 = none (honest run or aborted before sifting)
  FinalRelation final_relation = FinalRelation::None;
  double qber_observed = 0.0;  // raw disagreement on honest matching-bases slots
  std::size_t key_bits_consumed = 0;
  std::size_t tags_consumed = 0;
  BitString sifted_a, sifted_b, sifted_e_alice_side, sifted_e_bob_side;
  std::vector<TraceEvent> trace;
  std::uint64_t forge_candidates_total = 0;
  unsigned forge_weight_total = 0;
  bool attack_goal_met = false;
  bool first_forge_accepted = false;  // the first substituted message passed verification
  unsigned eve_uncertain_bits = 0;    // key bits Eve had to guess (encrypted-syndrome attacks)
  FinalRelation goal_relation = FinalRelation::None;  // what the strategy set out to reach
};

struct SessionConfig {
  ProtocolVariant variant = ProtocolVariant::P1;
  AuthScheme auth;
  std::size_t n_slots = 1024;
  ChannelParams channel;  // honest quantum channel between the parties
  std::uint64_t seed = 1;
};

/// Everything an attack strategy may touch: it owns both channels.
struct AttackContext {
  const SessionConfig& config;
  AliceMachine& alice;
  BobMachine& bob;
  Rng& eve_rng;
  SessionOutcome& outcome;
};

class AttackStrategyBase {
 public:
  virtual ~AttackStrategyBase() = default;
  virtual void run(AttackContext& ctx) = 0;
};

/// Executes one session. Without an adversary the messages pass untouched;
/// with one, the strategy drives both channels.
SessionOutcome run_protocol(const SessionConfig& config, AttackStrategyBase* adversary = nullptr);

/// Raw-key disagreement between the parties on slots where their own bases
/// agree and both hold a result.
double matching_bases_qber(const PartyView& alice, const PartyView& bob);

/// The published no-P3 rule: privacy amplification derived from the mixer
/// expanded over both direction transcripts. Each party applies it to its own
/// view; an adversary who saw every frame can reproduce both.
PaSpec derive_transcript_pa(const std::vector<std::uint8_t>& dir_a,
                            const std::vector<std::uint8_t>& dir_b, std::size_t key_len,
                            double eps);

}  // namespace qkdlab
