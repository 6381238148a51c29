#include "qkdlab/public_hash.hpp"

#include <stdexcept>

namespace qkdlab {

std::uint64_t packed_block(std::span<const std::uint8_t> bytes, std::size_t block_index) {
  std::uint64_t w = 0;
  std::size_t base = block_index * 8;
  for (std::size_t k = 0; k < 8; ++k) {
    w <<= 8;
    if (base + k < bytes.size()) w |= bytes[base + k];
  }
  return w;
}

std::uint64_t public_hash_value(const PublicHashSpec& spec,
                                std::span<const std::uint8_t> bytes,
                                std::size_t nbits) {
  if (spec.z_bits < 1 || spec.z_bits > 64) throw std::invalid_argument("z_bits must be in [1,64]");
  MixerState m(spec.mixer_seed);
  std::size_t nblocks = (bytes.size() + 7) / 8;
  for (std::size_t i = 0; i < nblocks; ++i) m.absorb_block(packed_block(bytes, i));
  std::uint64_t v = m.finalize(nbits);
  return spec.z_bits == 64 ? v : v & ((std::uint64_t{1} << spec.z_bits) - 1);
}

BitString public_hash_f(const PublicHashSpec& spec, const BitString& message) {
  return BitString::from_uint(public_hash_uint(spec, message), spec.z_bits);
}

std::uint64_t public_hash_uint(const PublicHashSpec& spec, const BitString& message) {
  return public_hash_value(spec, message.bytes(), message.size());
}

}  // namespace qkdlab
