#include "qkdlab/key_ledger.hpp"

namespace qkdlab {

BitString KeyLedger::take(std::size_t nbits, const std::string& purpose) {
  if (cursor_ + nbits > pool_.size())
    throw LedgerExhausted("key ledger exhausted taking " + std::to_string(nbits) + " bits for " + purpose);
  BitString out = pool_.slice(cursor_, nbits);
  cursor_ += nbits;
  by_purpose_[purpose] += nbits;
  return out;
}

}  // namespace qkdlab
