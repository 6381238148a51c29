#include "qkdlab/universal_hash.hpp"

#include <stdexcept>

namespace qkdlab {

Su2Key su2_key_from_bits(unsigned z_bits, unsigned t_bits, const BitString& material) {
  if (material.size() != z_bits + t_bits)
    throw std::invalid_argument("su2 key needs exactly z_bits + t_bits of material");
  Su2Key k;
  k.z_bits = z_bits;
  k.t_bits = t_bits;
  k.a = material.read_uint(0, z_bits);
  k.b = material.read_uint(z_bits, t_bits);
  return k;
}

std::uint64_t su2_eval_uint(const Su2Key& key, std::uint64_t digest) {
  Gf2Field field(key.z_bits);
  std::uint64_t prod = field.mul(key.a, digest);
  std::uint64_t mask = key.t_bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << key.t_bits) - 1;
  return (prod & mask) ^ key.b;
}

Tag su2_eval(const Su2Key& key, const BitString& digest) {
  if (digest.size() != key.z_bits)
    throw std::invalid_argument("digest width does not match su2 key field width");
  std::uint64_t d = digest.read_uint(0, digest.size());
  return Tag{BitString::from_uint(su2_eval_uint(key, d), key.t_bits)};
}

std::size_t Au2FamilySpec::capacity_bits() const {
  // The padded sequence (prefix + data) must stay at max_blocks - 1 blocks:
  // every difference polynomial then has at most max_blocks - 1 distinct
  // roots (the zero point included), which makes epsilon_prime tight.
  if (max_blocks < 2) return 0;
  std::size_t by_blocks = static_cast<std::size_t>(max_blocks - 2) * z_bits;
  // length prefix block must hold the exact bit length
  if (z_bits < 64) {
    std::uint64_t limit = (std::uint64_t{1} << z_bits) - 1;
    if (by_blocks > limit) return static_cast<std::size_t>(limit);
  }
  return by_blocks;
}

std::uint64_t poly_eval_blocks(const Gf2Field& field, std::uint64_t point,
                               std::span<const std::uint64_t> blocks) {
  // Horner over sum b_i S^i = S*(b_1 + S*(b_2 + ... )).
  std::uint64_t acc = 0;
  for (std::size_t i = blocks.size(); i-- > 0;) acc = field.mul(acc, point) ^ blocks[i];
  return field.mul(acc, point);
}

std::vector<std::uint64_t> pad_blocks(const Au2FamilySpec& family, const BitString& message) {
  if (message.size() > family.capacity_bits())
    throw std::invalid_argument("message exceeds max_blocks capacity");
  std::vector<std::uint64_t> blocks;
  blocks.reserve(1 + (message.size() + family.z_bits - 1) / family.z_bits);
  blocks.push_back(message.size());
  for (std::size_t off = 0; off < message.size(); off += family.z_bits) {
    std::size_t take = std::min<std::size_t>(family.z_bits, message.size() - off);
    std::uint64_t b = message.read_uint(off, take);
    b <<= family.z_bits - take;  // zero-pad on the right, bits stay MSB-first
    blocks.push_back(b);
  }
  return blocks;
}

std::uint64_t poly_au2_eval_uint(const Au2FamilySpec& family, std::uint64_t point,
                                 const BitString& message) {
  Gf2Field field(family.z_bits);
  auto blocks = pad_blocks(family, message);
  return poly_eval_blocks(field, point, blocks);
}

BitString poly_au2_eval(const Au2FamilySpec& family, std::uint64_t point,
                        const BitString& message) {
  return BitString::from_uint(poly_au2_eval_uint(family, point, message), family.z_bits);
}

}  // namespace qkdlab
