#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>

#include "qkdlab/bitstring.hpp"

namespace qkdlab {

struct LedgerExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Pool of pre-shared secret bits. The cursor is monotone; every bit is
/// issued exactly once and exhaustion is an error, never reuse.
class KeyLedger {
 public:
  KeyLedger() = default;
  explicit KeyLedger(BitString pool) : pool_(std::move(pool)) {}

  BitString take(std::size_t nbits, const std::string& purpose);

  std::size_t consumed() const { return cursor_; }
  std::size_t remaining() const { return pool_.size() - cursor_; }
  const std::map<std::string, std::size_t>& consumption_by_purpose() const { return by_purpose_; }

 private:
  BitString pool_;
  std::size_t cursor_ = 0;
  std::map<std::string, std::size_t> by_purpose_;
};

}  // namespace qkdlab
