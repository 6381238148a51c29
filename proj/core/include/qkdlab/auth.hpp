#pragma once

#include <optional>
#include <stdexcept>
#include <variant>

#include "qkdlab/bitstring.hpp"
#include "qkdlab/key_ledger.hpp"
#include "qkdlab/public_hash.hpp"
#include "qkdlab/universal_hash.hpp"

namespace qkdlab {

/// Countermeasure rungs for the two-step MAC t = h_K(f(m)).
enum class AuthVariant {
  TwoStep,      // t = h_K(f(m)), the attacked baseline
  Salted,       // t = h_K(f(salt || m)), salt fixed and public
  NonceAlice,   // t = h_K(f(nonce || m)), nonce chosen by the sender, in transit
  NonceBob,     // same, nonce chosen by the receiver
  FixedSecret,  // t = h_K(f(S || m)), S fixed and secret
  FreshSecret,  // t = h_K(f(S || m)), S drawn from the ledger per message
  ItsComposed,  // t = h_K(f_S(m)), S selects an AU2 member; actually ITS
};

struct AuthScheme {
  AuthVariant variant = AuthVariant::TwoStep;
  PublicHashSpec public_hash;       // the inner f for all non-composed rungs
  unsigned t_bits = 16;
  BitString salt;                   // Salted only
  BitString fixed_secret;           // FixedSecret only
  unsigned secret_bits = 64;        // |S| for FreshSecret
  Au2FamilySpec au2;                // ItsComposed only; su2 width = au2.z_bits

  /// Width of the su2 input (and therefore of the su2 key's field part).
  unsigned z_bits() const {
    return variant == AuthVariant::ItsComposed ? au2.z_bits : public_hash.z_bits;
  }
  /// Whether an eavesdropper can compute the inner digest of observed
  /// messages. False for the secret-prefix rungs and the composed family.
  bool digest_public() const {
    return variant == AuthVariant::TwoStep || variant == AuthVariant::Salted ||
           variant == AuthVariant::NonceAlice || variant == AuthVariant::NonceBob;
  }
  bool per_message_material() const {
    return variant == AuthVariant::FreshSecret || variant == AuthVariant::ItsComposed;
  }
  bool needs_nonce() const {
    return variant == AuthVariant::NonceAlice || variant == AuthVariant::NonceBob;
  }
};

/// Tag computation for every rung. per_message supplies the nonce for the
/// nonce rungs, the fresh secret for FreshSecret and the AU2 index for
/// ItsComposed; it is forbidden elsewhere (TwoStep/Salted/FixedSecret carry
/// everything in the scheme).
Tag two_step_tag(const AuthScheme& scheme, const Su2Key& key, const BitString& message,
                 const std::optional<BitString>& per_message = std::nullopt);

/// The digest the su2 stage sees (useful to adversaries exactly when
/// digest_public()).
std::uint64_t inner_digest(const AuthScheme& scheme, const BitString& message,
                           const std::optional<BitString>& per_message = std::nullopt);

/// Per-message key material drawn from a ledger: the su2 key and, where the
/// rung needs one, the per-message secret. Both parties draw identically.
struct MessageKey {
  Su2Key su2;
  std::optional<BitString> per_message;  // FreshSecret / ItsComposed
};

MessageKey draw_message_key(const AuthScheme& scheme, KeyLedger& ledger);

/// Ledger bits one tag costs under the scheme.
std::size_t tag_key_cost(const AuthScheme& scheme);

}  // namespace qkdlab
