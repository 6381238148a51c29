#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qkdlab/bitstring.hpp"
#include "qkdlab/public_hash.hpp"
#include "qkdlab/wire.hpp"

namespace qkdlab {

/// Candidate space for second-preimage search on one frame field: bit
/// positions open to mutation and the Hamming-weight budget.
struct MutationSpace {
  WireMessage base_message;
  std::size_t mutable_field = 0;
  std::vector<std::uint32_t> mutable_positions;  // distinct, within the field
  unsigned w_max = 3;
};

struct ForgeResult {
  bool found = false;
  WireMessage message;
  unsigned weight_used = 0;
  std::uint64_t candidates_tested = 0;
};

/// Exhausts the Hamming ball around the base message in increasing weight
/// (weight 0 first), lexicographic position order within a weight, and
/// returns the first candidate whose inner digest matches target_digest.
/// An optional prefix is hashed before the frame (salt/nonce rungs).
/// hash_prefix / hash_suffix are hashed before/after the frame: the prefix
/// carries salt or nonce material, the suffix later frames of a delayed-auth
/// transcript. Both must be byte strings (bit length divisible by 8) except
/// the prefix in the slow path.
ForgeResult find_colliding_message(const MutationSpace& space, std::uint64_t target_digest,
                                   const PublicHashSpec& spec,
                                   const BitString& hash_prefix = BitString(),
                                   const BitString& hash_suffix = BitString());

/// Popcount-preserving variant for sift-mask fields: candidates swap one
/// selected position off and one unselected position on, enumerated in
/// ascending damage order (selected-gap between the pair, then positions),
/// then in pairs of swaps. Used where the mask's popcount carries structure.
struct SwapForgeResult {
  bool found = false;
  WireMessage message;
  unsigned weight_used = 0;  // flipped bits, i.e. 2 per swap
  std::uint64_t candidates_tested = 0;
};
SwapForgeResult find_colliding_mask(const WireMessage& base, std::size_t field_index,
                                    std::uint64_t target_digest, const PublicHashSpec& spec,
                                    unsigned max_swaps,
                                    const std::function<bool(std::uint32_t, std::uint32_t)>&
                                        prefer_equal_value = nullptr,
                                    const BitString& hash_prefix = BitString(),
                                    const BitString& hash_suffix = BitString());

/// Generic deterministic enumeration: candidates are produced by `emit`
/// (applied to a counter) until the digest of the produced frame matches.
/// Used for derived-frame searches (syndrome or PA-seed mutation) where the
/// mutable object is not a frame field.
struct GeneratedForge {
  bool found = false;
  std::uint64_t counter = 0;
  std::uint64_t candidates_tested = 0;
};
GeneratedForge search_generated(const std::function<std::vector<std::uint8_t>(std::uint64_t)>& emit,
                                std::uint64_t target_digest, const PublicHashSpec& spec,
                                std::uint64_t max_candidates,
                                const BitString& hash_prefix = BitString(),
                                const BitString& hash_suffix = BitString());

/// Digest of a frame with an optional prefix, exactly as the authenticator
/// computes it for the public rungs.
std::uint64_t frame_digest(const PublicHashSpec& spec, const WireMessage& msg,
                           const BitString& hash_prefix = BitString());

}  // namespace qkdlab
