#pragma once

#include <memory>
#include <optional>
#include <string>

#include "qkdlab/protocol.hpp"

namespace qkdlab {

enum class AttackKind {
  None,
  StraightforwardMitm,  // independent sessions, tags guessed; negative control
  InterleaveQm,         // full quantum-memory interleave vs immediate auth
  OneSidedQm,           // delayed auth, only A->B messages touched
  BidirectionalQm,      // delayed auth, Bob's leg completed first to harvest his tag
  InterceptResend,      // no-memory attack vs Bob-announces-bases protocols
  Matrix,               // one sifting-stage cell: row / memory / auth mode
  NoP3P1,               // interleave vs the derived-PA variant
  NoP3P2,               // delayed variant, tag moves onto the reconciliation message
  NoP3P3,               // intercept-resend vs the derived-PA variant
  OtpQm,                // encrypted-syndrome variant, memory: pad recovered exactly
  OtpGuess,             // encrypted-syndrome variant, no memory: pad guessed, p = 2^-w
};

struct AttackSpec {
  AttackKind kind = AttackKind::None;
  // Matrix cell coordinates; ignored elsewhere.
  bool row_bob_sends = false;
  bool qm = true;
  bool delayed = false;
  // Search budgets.
  unsigned w_max = 3;
  unsigned max_swaps = 2;
  std::uint64_t max_candidates = std::uint64_t{1} << 22;
  // Eve's deliberate loss on the frames she re-sends (quantum-memory
  // interleaves only): shortens Bob's sifted key so the subsequence craft
  // almost always completes without mismatches.
  double blank_fraction = 0.125;
  std::size_t craft_budget = 0;  // 0: auto (4 * sqrt(n))
  double eve_flip_prob = 0.0;    // imperfection of Eve's instruments
};

/// True when the strategy needs quantum storage.
bool attack_requires_qm(const AttackSpec& spec);
/// The protocol variant the strategy is written against.
ProtocolVariant attack_default_protocol(const AttackSpec& spec);

std::unique_ptr<AttackStrategyBase> make_attack(const AttackSpec& spec);

/// CLI names: none, straightforward-mitm, interleave-qm, one-sided-qm,
/// bidirectional-qm, intercept-resend, matrix-{a,b}-{qm,noqm}-{imm,del},
/// nop3-p1, nop3-p2, nop3-p3, otp-qm, otp-guess.
std::optional<AttackSpec> attack_from_name(const std::string& name);
std::string attack_name(const AttackSpec& spec);

}  // namespace qkdlab
