#pragma once

#include <cstdint>
#include <vector>

#include "qkdlab/bitstring.hpp"

namespace qkdlab {

/// Systematic binary block code used for one-way syndrome reconciliation.
/// H is syndrome_len x block_len; decoding picks the minimum-weight coset
/// leader found by brute force up to decode_radius. Beyond the radius the
/// decoder silently miscorrects, as real decoders do.
class EcCode {
 public:
  EcCode(unsigned index, unsigned block_len, unsigned syndrome_len, unsigned decode_radius,
         std::vector<std::uint16_t> h_columns);

  unsigned index() const { return index_; }
  unsigned block_len() const { return block_len_; }
  unsigned syndrome_len() const { return syndrome_len_; }
  unsigned decode_radius() const { return decode_radius_; }
  const std::vector<std::uint16_t>& columns() const { return cols_; }

  /// Syndrome of one block (low block_len bits of `block`).
  std::uint16_t block_syndrome(std::uint16_t block) const;
  /// Coset leader (error pattern) for a syndrome, weight <= radius; zero when
  /// no leader exists within the radius.
  std::uint16_t leader(std::uint16_t syndrome) const;

  /// Key is zero-padded to a block multiple (padding rule published with the
  /// code tables). Returns ceil(|key|/block_len) * syndrome_len bits.
  BitString syndrome(const BitString& key) const;
  /// Corrects `key` toward the key that produced `target_syndrome`.
  BitString correct(const BitString& key, const BitString& target_syndrome) const;

 private:
  unsigned index_, block_len_, syndrome_len_, decode_radius_;
  std::vector<std::uint16_t> cols_;
  std::vector<std::uint16_t> leaders_;  // syndrome -> min-weight pattern
};

/// The published set EC = {EC_1, EC_2, EC_3}; matrices mirrored in
/// docs/ec_codes_v1.txt.
const std::vector<EcCode>& published_codes();

/// First-round default: the strongest published code.
const EcCode& default_code();
/// Code selection by estimated channel error rate.
const EcCode& select_code(double epsilon_estimate);

/// Published deterministic interleaver applied to the sifted key before
/// block-syndrome computation; spreads locally clustered errors across
/// blocks. Derived from the key length alone so both parties agree.
std::vector<std::uint32_t> ec_interleaver(std::size_t key_len);
BitString ec_permute(const BitString& key, const std::vector<std::uint32_t>& perm);
BitString ec_unpermute(const BitString& key, const std::vector<std::uint32_t>& perm);

}  // namespace qkdlab
