#include "qkdlab/bitstring.hpp"

#include <bit>
#include <stdexcept>

namespace qkdlab {

BitString BitString::from_bytes(std::vector<std::uint8_t> bytes, std::size_t nbits) {
  if (bytes.size() != (nbits + 7) / 8) throw std::invalid_argument("byte count does not match bit length");
  BitString out;
  out.nbits_ = nbits;
  out.bytes_ = std::move(bytes);
  out.clear_tail_padding();
  return out;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t nbits) {
  if (nbits > 64) throw std::invalid_argument("from_uint limited to 64 bits");
  BitString out(nbits);
  for (std::size_t i = 0; i < nbits; ++i)
    out.set(i, (value >> (nbits - 1 - i)) & 1);
  return out;
}

BitString BitString::from_string(const std::string& s) {
  BitString out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1') throw std::invalid_argument("bit string literal must be 0/1");
    out.set(i, s[i] == '1');
  }
  return out;
}

void BitString::push_back(bool v) {
  if (nbits_ % 8 == 0) bytes_.push_back(0);
  ++nbits_;
  set(nbits_ - 1, v);
}

void BitString::append(const BitString& other) {
  if (nbits_ % 8 == 0) {
    bytes_.insert(bytes_.end(), other.bytes_.begin(), other.bytes_.end());
    nbits_ += other.nbits_;
    return;
  }
  for (std::size_t i = 0; i < other.nbits_; ++i) push_back(other.get(i));
}

BitString BitString::slice(std::size_t from, std::size_t len) const {
  if (from + len > nbits_) throw std::out_of_range("slice beyond bit length");
  BitString out(len);
  for (std::size_t i = 0; i < len; ++i) out.set(i, get(from + i));
  return out;
}

std::uint64_t BitString::read_uint(std::size_t from, std::size_t len) const {
  if (len > 64) throw std::invalid_argument("read_uint limited to 64 bits");
  if (from + len > nbits_) throw std::out_of_range("read beyond bit length");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < len; ++i) v = (v << 1) | (get(from + i) ? 1u : 0u);
  return v;
}

std::size_t BitString::popcount() const {
  std::size_t n = 0;
  for (std::uint8_t b : bytes_) n += static_cast<std::size_t>(std::popcount(b));
  return n;
}

std::size_t BitString::hamming_distance(const BitString& other) const {
  if (nbits_ != other.nbits_) throw std::invalid_argument("hamming distance needs equal lengths");
  std::size_t n = 0;
  for (std::size_t i = 0; i < bytes_.size(); ++i)
    n += static_cast<std::size_t>(std::popcount(static_cast<std::uint8_t>(bytes_[i] ^ other.bytes_[i])));
  return n;
}

BitString BitString::operator^(const BitString& other) const {
  BitString out = *this;
  out ^= other;
  return out;
}

BitString& BitString::operator^=(const BitString& other) {
  if (nbits_ != other.nbits_) throw std::invalid_argument("xor needs equal lengths");
  for (std::size_t i = 0; i < bytes_.size(); ++i) bytes_[i] ^= other.bytes_[i];
  return *this;
}

bool BitString::operator==(const BitString& other) const {
  return nbits_ == other.nbits_ && bytes_ == other.bytes_;
}

std::string BitString::to_string() const {
  std::string s(nbits_, '0');
  for (std::size_t i = 0; i < nbits_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

std::string BitString::to_hex() const {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(bytes_.size() * 2);
  for (std::uint8_t b : bytes_) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xf]);
  }
  return s;
}

void BitString::clear_tail_padding() {
  if (nbits_ % 8 != 0 && !bytes_.empty())
    bytes_.back() &= static_cast<std::uint8_t>(0xffu << (8 - nbits_ % 8));
}

}  // namespace qkdlab
