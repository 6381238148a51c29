#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qkdlab {

/// Arbitrary-length bit sequence, packed MSB-first within each byte and
/// zero-padded at the tail. The substrate of keys, bases, masks and wire
/// message fields.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t nbits) : nbits_(nbits), bytes_((nbits + 7) / 8, 0) {}

  /// Wraps pre-packed bytes; trailing pad bits beyond nbits are cleared.
  static BitString from_bytes(std::vector<std::uint8_t> bytes, std::size_t nbits);
  /// Low `nbits` of `value`, most significant of those bits first.
  static BitString from_uint(std::uint64_t value, std::size_t nbits);
  /// Characters '0'/'1', leftmost char is bit 0.
  static BitString from_string(const std::string& s);

  std::size_t size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }

  bool get(std::size_t i) const {
    return (bytes_[i >> 3] >> (7 - (i & 7))) & 1;
  }
  void set(std::size_t i, bool v) {
    std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - (i & 7)));
    if (v) bytes_[i >> 3] |= mask; else bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
  }
  void flip(std::size_t i) { bytes_[i >> 3] ^= static_cast<std::uint8_t>(1u << (7 - (i & 7))); }

  void push_back(bool v);
  void append(const BitString& other);

  /// Bits [from, from+len) as a new string.
  BitString slice(std::size_t from, std::size_t len) const;

  /// Interprets bits [from, from+len) as an unsigned value, first bit most
  /// significant. len <= 64.
  std::uint64_t read_uint(std::size_t from, std::size_t len) const;

  std::size_t popcount() const;
  std::size_t hamming_distance(const BitString& other) const;

  BitString operator^(const BitString& other) const;
  BitString& operator^=(const BitString& other);
  bool operator==(const BitString& other) const;
  bool operator!=(const BitString& other) const { return !(*this == other); }

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t>& mutable_bytes() { return bytes_; }

  std::string to_string() const;
  std::string to_hex() const;

 private:
  void clear_tail_padding();

  std::size_t nbits_ = 0;
  std::vector<std::uint8_t> bytes_;
};

}  // namespace qkdlab
