#include "qkdlab/linear_code.hpp"

#include <bit>
#include <stdexcept>

#include "qkdlab/rng.hpp"

namespace qkdlab {

EcCode::EcCode(unsigned index, unsigned block_len, unsigned syndrome_len, unsigned decode_radius,
               std::vector<std::uint16_t> h_columns)
    : index_(index),
      block_len_(block_len),
      syndrome_len_(syndrome_len),
      decode_radius_(decode_radius),
      cols_(std::move(h_columns)) {
  if (block_len_ > 16 || syndrome_len_ > 16) throw std::invalid_argument("block codes are 16-bit scale");
  if (cols_.size() != block_len_) throw std::invalid_argument("need one column per block bit");
  // Brute-force coset leader table: all patterns of weight <= radius, lowest
  // weight wins; collisions within the radius are a construction error.
  leaders_.assign(std::size_t{1} << syndrome_len_, 0);
  std::vector<unsigned> weight(std::size_t{1} << syndrome_len_, ~0u);
  weight[0] = 0;
  for (std::uint32_t pat = 1; pat < (1u << block_len_); ++pat) {
    unsigned w = static_cast<unsigned>(std::popcount(pat));
    if (w > decode_radius_) continue;
    std::uint16_t s = block_syndrome(static_cast<std::uint16_t>(pat));
    if (weight[s] <= decode_radius_ && leaders_[s] != pat)
      throw std::logic_error("coset leader collision within decode radius");
    if (w < weight[s]) {
      weight[s] = w;
      leaders_[s] = static_cast<std::uint16_t>(pat);
    }
  }
}

std::uint16_t EcCode::block_syndrome(std::uint16_t block) const {
  std::uint16_t s = 0;
  std::uint16_t b = block;
  while (b) {
    unsigned i = static_cast<unsigned>(std::countr_zero(b));
    b &= static_cast<std::uint16_t>(b - 1);
    // column j multiplies key bit j counted MSB-first
    s ^= cols_[block_len_ - 1 - i];
  }
  return s;
}

std::uint16_t EcCode::leader(std::uint16_t syndrome) const { return leaders_[syndrome]; }

BitString EcCode::syndrome(const BitString& key) const {
  std::size_t nblocks = (key.size() + block_len_ - 1) / block_len_;
  BitString out(nblocks * syndrome_len_);
  for (std::size_t b = 0; b < nblocks; ++b) {
    std::size_t off = b * block_len_;
    std::size_t take = std::min<std::size_t>(block_len_, key.size() - off);
    std::uint16_t block = static_cast<std::uint16_t>(key.read_uint(off, take));
    block = static_cast<std::uint16_t>(block << (block_len_ - take));  // zero-pad on the right
    std::uint16_t s = block_syndrome(block);
    for (unsigned i = 0; i < syndrome_len_; ++i)
      out.set(b * syndrome_len_ + i, (s >> (syndrome_len_ - 1 - i)) & 1);
  }
  return out;
}

BitString EcCode::correct(const BitString& key, const BitString& target_syndrome) const {
  std::size_t nblocks = (key.size() + block_len_ - 1) / block_len_;
  if (target_syndrome.size() != nblocks * syndrome_len_)
    throw std::invalid_argument("syndrome length does not match key block count");
  BitString own = syndrome(key);
  BitString out = key;
  for (std::size_t b = 0; b < nblocks; ++b) {
    std::uint16_t delta = static_cast<std::uint16_t>(
        own.read_uint(b * syndrome_len_, syndrome_len_) ^
        target_syndrome.read_uint(b * syndrome_len_, syndrome_len_));
    if (!delta) continue;
    std::uint16_t pat = leaders_[delta];
    std::size_t off = b * block_len_;
    std::size_t take = std::min<std::size_t>(block_len_, key.size() - off);
    for (unsigned i = 0; i < take; ++i)
      if ((pat >> (block_len_ - 1 - i)) & 1) out.flip(off + i);
  }
  return out;
}

namespace {

std::vector<EcCode> build_published_codes() {
  // Frozen systematic parity-check matrices, given as columns (info columns
  // first, then the identity part), mirrored in docs/ec_codes_v1.txt.
  std::vector<EcCode> codes;
  codes.emplace_back(1, 16, 5, 1, std::vector<std::uint16_t>{
      0x01c, 0x013, 0x00c, 0x00f, 0x01e, 0x009, 0x016, 0x012, 0x014, 0x01f, 0x018,
      0x010, 0x008, 0x004, 0x002, 0x001});
  codes.emplace_back(2, 16, 8, 2, std::vector<std::uint16_t>{
      0x053, 0x0cf, 0x075, 0x095, 0x03b, 0x0ea, 0x05c, 0x0a3,
      0x080, 0x040, 0x020, 0x010, 0x008, 0x004, 0x002, 0x001});
  codes.emplace_back(3, 16, 12, 3, std::vector<std::uint16_t>{
      0x52f, 0xc74, 0xa6e, 0xd89,
      0x800, 0x400, 0x200, 0x100, 0x080, 0x040, 0x020, 0x010, 0x008, 0x004, 0x002, 0x001});
  return codes;
}

}  // namespace

const std::vector<EcCode>& published_codes() {
  static const std::vector<EcCode> codes = build_published_codes();
  return codes;
}

const EcCode& default_code() { return published_codes().back(); }

const EcCode& select_code(double epsilon_estimate) {
  const auto& codes = published_codes();
  if (epsilon_estimate < 0.01) return codes[0];
  if (epsilon_estimate < 0.03) return codes[1];
  return codes[2];
}

std::vector<std::uint32_t> ec_interleaver(std::size_t key_len) {
  std::vector<std::uint32_t> perm(key_len);
  for (std::size_t i = 0; i < key_len; ++i) perm[i] = static_cast<std::uint32_t>(i);
  // Fisher-Yates driven by the seed-derivation mix; depends on length only.
  std::uint64_t s = derive_seed(0x7e1ace5eedULL, key_len);
  for (std::size_t i = key_len; i > 1; --i) {
    s = mix64(s + kSeedGamma);
    std::size_t j = s % i;
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

BitString ec_permute(const BitString& key, const std::vector<std::uint32_t>& perm) {
  BitString out(key.size());
  for (std::size_t i = 0; i < key.size(); ++i) out.set(i, key.get(perm[i]));
  return out;
}

BitString ec_unpermute(const BitString& key, const std::vector<std::uint32_t>& perm) {
  BitString out(key.size());
  for (std::size_t i = 0; i < key.size(); ++i) out.set(perm[i], key.get(i));
  return out;
}

}  // namespace qkdlab
