#include "qkdlab/auth.hpp"

namespace qkdlab {

namespace {

BitString prefixed(const BitString& prefix, const BitString& message) {
  BitString out = prefix;
  out.append(message);
  return out;
}

}  // namespace

std::uint64_t inner_digest(const AuthScheme& scheme, const BitString& message,
                           const std::optional<BitString>& per_message) {
  switch (scheme.variant) {
    case AuthVariant::TwoStep:
      if (per_message) throw std::invalid_argument("two-step takes no per-message material");
      return public_hash_uint(scheme.public_hash, message);
    case AuthVariant::Salted:
      if (per_message) throw std::invalid_argument("salted scheme takes no per-message material");
      return public_hash_uint(scheme.public_hash, prefixed(scheme.salt, message));
    case AuthVariant::NonceAlice:
    case AuthVariant::NonceBob:
      if (!per_message) throw std::invalid_argument("nonce scheme needs the nonce");
      return public_hash_uint(scheme.public_hash, prefixed(*per_message, message));
    case AuthVariant::FixedSecret:
      if (per_message) throw std::invalid_argument("fixed-secret scheme takes no per-message material");
      return public_hash_uint(scheme.public_hash, prefixed(scheme.fixed_secret, message));
    case AuthVariant::FreshSecret:
      if (!per_message) throw std::invalid_argument("fresh-secret scheme needs its secret");
      return public_hash_uint(scheme.public_hash, prefixed(*per_message, message));
    case AuthVariant::ItsComposed: {
      if (!per_message) throw std::invalid_argument("composed scheme needs its family index");
      std::uint64_t point = per_message->read_uint(0, per_message->size());
      return poly_au2_eval_uint(scheme.au2, point, message);
    }
  }
  throw std::logic_error("unreachable");
}

Tag two_step_tag(const AuthScheme& scheme, const Su2Key& key, const BitString& message,
                 const std::optional<BitString>& per_message) {
  if (key.z_bits != scheme.z_bits() || key.t_bits != scheme.t_bits)
    throw std::invalid_argument("su2 key does not match scheme widths");
  std::uint64_t digest = inner_digest(scheme, message, per_message);
  return Tag{BitString::from_uint(su2_eval_uint(key, digest), scheme.t_bits)};
}

MessageKey draw_message_key(const AuthScheme& scheme, KeyLedger& ledger) {
  MessageKey mk;
  mk.su2 = su2_key_from_bits(scheme.z_bits(), scheme.t_bits,
                             ledger.take(scheme.z_bits() + scheme.t_bits, "su2-key"));
  if (scheme.variant == AuthVariant::FreshSecret)
    mk.per_message = ledger.take(scheme.secret_bits, "fresh-secret");
  else if (scheme.variant == AuthVariant::ItsComposed)
    mk.per_message = ledger.take(scheme.au2.z_bits, "au2-index");
  return mk;
}

std::size_t tag_key_cost(const AuthScheme& scheme) {
  std::size_t cost = scheme.z_bits() + scheme.t_bits;
  if (scheme.variant == AuthVariant::FreshSecret) cost += scheme.secret_bits;
  if (scheme.variant == AuthVariant::ItsComposed) cost += scheme.au2.z_bits;
  return cost;
}

}  // namespace qkdlab
