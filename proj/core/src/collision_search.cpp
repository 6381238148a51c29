#include "qkdlab/collision_search.hpp"

#include <algorithm>
#include <stdexcept>

namespace qkdlab {

namespace {

/// Buffer hashing with per-block prefix states: a mutation dirties only the
/// suffix of blocks from its first touched byte.
class FrameHasher {
 public:
  FrameHasher(const PublicHashSpec& spec, std::vector<std::uint8_t> bytes, std::size_t total_bits)
      : spec_(spec), total_bits_(total_bits), buf_(std::move(bytes)) {
    std::size_t nblocks = (buf_.size() + 7) / 8;
    states_.reserve(nblocks + 1);
    MixerState m(spec_.mixer_seed);
    states_.push_back(m.raw());
    for (std::size_t i = 0; i < nblocks; ++i) {
      m.absorb_block(packed_block(buf_, i));
      states_.push_back(m.raw());
    }
    mask_ = spec_.z_bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << spec_.z_bits) - 1;
  }

  std::vector<std::uint8_t>& buffer() { return buf_; }

  std::uint64_t digest_from(std::size_t dirty_byte) const {
    std::size_t nblocks = (buf_.size() + 7) / 8;
    std::size_t b0 = std::min(dirty_byte / 8, nblocks);
    MixerState m = MixerState::from_raw(states_[b0]);
    for (std::size_t i = b0; i < nblocks; ++i) m.absorb_block(packed_block(buf_, i));
    return m.finalize(total_bits_) & mask_;
  }

 private:
  PublicHashSpec spec_;
  std::size_t total_bits_;
  std::vector<std::uint8_t> buf_;
  std::vector<std::uint64_t> states_;
  std::uint64_t mask_ = 0;
};

bool aligned_prefix(const BitString& prefix) { return prefix.size() % 8 == 0; }

std::vector<std::uint8_t> combined_bytes(const BitString& prefix, const WireMessage& msg,
                                         const BitString& suffix) {
  std::vector<std::uint8_t> out = prefix.bytes();
  auto frame = encode_frame(msg);
  out.insert(out.end(), frame.begin(), frame.end());
  const auto& sb = suffix.bytes();
  out.insert(out.end(), sb.begin(), sb.end());
  return out;
}

std::uint64_t slow_digest(const PublicHashSpec& spec, const BitString& prefix,
                          const WireMessage& msg, const BitString& suffix) {
  BitString all = prefix;
  all.append(frame_bits(msg));
  all.append(suffix);
  return public_hash_uint(spec, all);
}

}  // namespace

std::uint64_t frame_digest(const PublicHashSpec& spec, const WireMessage& msg,
                           const BitString& hash_prefix) {
  if (aligned_prefix(hash_prefix)) {
    auto bytes = combined_bytes(hash_prefix, msg, BitString());
    std::size_t bits = bytes.size() * 8;
    return public_hash_value(spec, bytes, bits);
  }
  return slow_digest(spec, hash_prefix, msg, BitString());
}

ForgeResult find_colliding_message(const MutationSpace& space, std::uint64_t target_digest,
                                   const PublicHashSpec& spec, const BitString& hash_prefix,
                                   const BitString& hash_suffix) {
  if (hash_suffix.size() % 8 != 0)
    throw std::invalid_argument("hash suffix must be byte aligned");
  if (space.mutable_field >= space.base_message.fields.size())
    throw std::invalid_argument("mutable field out of range");
  const std::size_t field_bits = space.base_message.fields[space.mutable_field].size();
  for (auto p : space.mutable_positions)
    if (p >= field_bits) throw std::invalid_argument("mutable position outside the field");

  MutationSpace norm;
  const MutationSpace* sp = &space;
  if (!std::is_sorted(space.mutable_positions.begin(), space.mutable_positions.end())) {
    norm = space;
    std::sort(norm.mutable_positions.begin(), norm.mutable_positions.end());
    sp = &norm;
  }
  const MutationSpace& space_sorted = *sp;

  ForgeResult result;
  if (!aligned_prefix(hash_prefix)) {
    // Rare path (unaligned salt): correctness over speed.
    WireMessage cand = space.base_message;
    auto& field = cand.fields[space.mutable_field];
    std::vector<std::uint32_t> combo;
    std::function<bool(unsigned, std::size_t)> rec = [&](unsigned remaining, std::size_t start) {
      if (remaining == 0) {
        ++result.candidates_tested;
        return slow_digest(spec, hash_prefix, cand, hash_suffix) == target_digest;
      }
      for (std::size_t i = start; i < space.mutable_positions.size(); ++i) {
        field.flip(space.mutable_positions[i]);
        if (rec(remaining - 1, i + 1)) {
          combo.push_back(space.mutable_positions[i]);
          return true;
        }
        field.flip(space.mutable_positions[i]);
      }
      return false;
    };
    for (unsigned w = 0; w <= space.w_max; ++w) {
      if (rec(w, 0)) {
        result.found = true;
        result.message = cand;
        result.weight_used = w;
        return result;
      }
    }
    return result;
  }

  const std::size_t prefix_bytes = hash_prefix.bytes().size();
  auto bytes = combined_bytes(hash_prefix, space.base_message, hash_suffix);
  const std::size_t total_bits = bytes.size() * 8;
  const std::size_t field_off =
      prefix_bytes + frame_field_offset(space.base_message, space.mutable_field);
  FrameHasher hasher(spec, std::move(bytes), total_bits);

  auto flip = [&](std::uint32_t pos) {
    hasher.buffer()[field_off + pos / 8] ^= static_cast<std::uint8_t>(0x80u >> (pos % 8));
  };
  auto byte_of = [&](std::uint32_t pos) { return field_off + pos / 8; };

  const auto& P = space_sorted.mutable_positions;
  const std::size_t np = P.size();

  // weight 0
  ++result.candidates_tested;
  if (hasher.digest_from(0) == target_digest) {
    result.found = true;
    result.message = space.base_message;
    result.weight_used = 0;
    return result;
  }

  auto next_combination = [np](std::vector<std::size_t>& c) -> bool {
    std::size_t w = c.size();
    std::size_t i = w;
    while (i-- > 0) {
      if (c[i] != i + np - w) {
        ++c[i];
        for (std::size_t k = i + 1; k < w; ++k) c[k] = c[k - 1] + 1;
        return true;
      }
    }
    return false;
  };

  std::vector<std::size_t> idx;
  for (unsigned w = 1; w <= space.w_max && w <= np; ++w) {
    idx.resize(w);
    for (std::size_t i = 0; i < w; ++i) idx[i] = i;
    do {
      for (std::size_t i = 0; i < w; ++i) flip(P[idx[i]]);
      ++result.candidates_tested;
      bool hit = hasher.digest_from(byte_of(P[idx[0]])) == target_digest;
      if (hit) {
        result.found = true;
        result.message = space.base_message;
        auto& field = result.message.fields[space.mutable_field];
        for (std::size_t i = 0; i < w; ++i) field.flip(P[idx[i]]);
        result.weight_used = w;
        return result;
      }
      for (std::size_t i = 0; i < w; ++i) flip(P[idx[i]]);
    } while (next_combination(idx));
  }
  return result;
}

SwapForgeResult find_colliding_mask(const WireMessage& base, std::size_t field_index,
                                    std::uint64_t target_digest, const PublicHashSpec& spec,
                                    unsigned max_swaps,
                                    const std::function<bool(std::uint32_t, std::uint32_t)>&
                                        prefer_equal_value,
                                    const BitString& hash_prefix, const BitString& hash_suffix) {
  SwapForgeResult result;
  if (!aligned_prefix(hash_prefix) || hash_suffix.size() % 8 != 0)
    throw std::invalid_argument("mask forging expects byte-aligned affixes");
  const BitString& field = base.fields.at(field_index);
  const std::size_t nbits = field.size();

  std::vector<std::uint32_t> selected, gap_of_unselected;
  std::vector<std::vector<std::uint32_t>> gaps;  // gaps[i]: unselected between selected i-1 and i
  gaps.emplace_back();
  for (std::uint32_t p = 0; p < nbits; ++p) {
    if (field.get(p)) {
      selected.push_back(p);
      gaps.emplace_back();
    } else {
      gaps.back().push_back(p);
    }
  }

  const std::size_t prefix_bytes = hash_prefix.bytes().size();
  auto bytes = combined_bytes(hash_prefix, base, hash_suffix);
  const std::size_t total_bits = bytes.size() * 8;
  const std::size_t field_off = prefix_bytes + frame_field_offset(base, field_index);
  FrameHasher hasher(spec, std::move(bytes), total_bits);
  auto flip = [&](std::uint32_t pos) {
    hasher.buffer()[field_off + pos / 8] ^= static_cast<std::uint8_t>(0x80u >> (pos % 8));
  };

  auto finish = [&](const std::vector<std::pair<std::uint32_t, std::uint32_t>>& swaps,
                    unsigned weight) {
    result.found = true;
    result.message = base;
    auto& f = result.message.fields[field_index];
    for (auto [p, q] : swaps) {
      f.flip(p);
      f.flip(q);
    }
    result.weight_used = weight;
  };

  ++result.candidates_tested;
  if (hasher.digest_from(0) == target_digest) {
    finish({}, 0);
    return result;
  }
  if (selected.empty() || max_swaps == 0) return result;

  // Single swaps by ascending damage rank: rank r pairs the selected position
  // a with unselected slots r gaps away.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> rank0;
  const std::size_t nsel = selected.size();
  for (std::size_t rank = 0; rank < nsel; ++rank) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> cands;
    for (std::size_t a = 0; a < nsel; ++a) {
      // gaps to the right of selected[a] at distance `rank`: gaps[a+1+rank]
      if (a + 1 + rank < gaps.size())
        for (auto q : gaps[a + 1 + rank]) cands.emplace_back(selected[a], q);
      // gaps to the left: gaps[a - rank]
      if (a >= rank)
        for (auto q : gaps[a - rank]) cands.emplace_back(selected[a], q);
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [&](const auto& x, const auto& y) {
                       if (prefer_equal_value) {
                         bool ex = prefer_equal_value(x.first, x.second);
                         bool ey = prefer_equal_value(y.first, y.second);
                         if (ex != ey) return ex;
                       }
                       return x < y;
                     });
    for (auto [p, q] : cands) {
      flip(p);
      flip(q);
      ++result.candidates_tested;
      bool hit = hasher.digest_from(field_off + std::min(p, q) / 8) == target_digest;
      flip(p);
      flip(q);
      if (hit) {
        finish({{p, q}}, 2);
        return result;
      }
    }
    if (rank == 0) rank0 = std::move(cands);
  }

  if (max_swaps < 2) return result;
  // Pairs of rank-0 swaps on disjoint positions.
  for (std::size_t i = 0; i < rank0.size(); ++i) {
    auto [p1, q1] = rank0[i];
    for (std::size_t j = i + 1; j < rank0.size(); ++j) {
      auto [p2, q2] = rank0[j];
      if (p1 == p2 || q1 == q2) continue;
      flip(p1); flip(q1); flip(p2); flip(q2);
      ++result.candidates_tested;
      std::uint32_t lo = std::min(std::min(p1, q1), std::min(p2, q2));
      bool hit = hasher.digest_from(field_off + lo / 8) == target_digest;
      flip(p1); flip(q1); flip(p2); flip(q2);
      if (hit) {
        finish({{p1, q1}, {p2, q2}}, 4);
        return result;
      }
    }
  }
  return result;
}

GeneratedForge search_generated(const std::function<std::vector<std::uint8_t>(std::uint64_t)>& emit,
                                std::uint64_t target_digest, const PublicHashSpec& spec,
                                std::uint64_t max_candidates, const BitString& hash_prefix,
                                const BitString& hash_suffix) {
  GeneratedForge result;
  if (!aligned_prefix(hash_prefix) || hash_suffix.size() % 8 != 0)
    throw std::invalid_argument("generated search expects byte-aligned affixes");
  const auto& pb = hash_prefix.bytes();
  const auto& sb = hash_suffix.bytes();

  // The prefix is constant: absorb its whole blocks once.
  MixerState base_state(spec.mixer_seed);
  std::size_t whole = pb.size() / 8;
  for (std::size_t i = 0; i < whole; ++i) base_state.absorb_block(packed_block(pb, i));
  std::vector<std::uint8_t> tail(pb.begin() + whole * 8, pb.end());
  std::uint64_t mask = spec.z_bits == 64 ? ~std::uint64_t{0}
                                         : (std::uint64_t{1} << spec.z_bits) - 1;

  std::vector<std::uint8_t> bytes;
  for (std::uint64_t c = 0; c < max_candidates; ++c) {
    auto frame = emit(c);
    bytes = tail;
    bytes.insert(bytes.end(), frame.begin(), frame.end());
    bytes.insert(bytes.end(), sb.begin(), sb.end());
    MixerState m = base_state;
    std::size_t nblocks = (bytes.size() + 7) / 8;
    for (std::size_t i = 0; i < nblocks; ++i) m.absorb_block(packed_block(bytes, i));
    ++result.candidates_tested;
    if ((m.finalize((pb.size() + frame.size() + sb.size()) * 8) & mask) == target_digest) {
      result.found = true;
      result.counter = c;
      return result;
    }
  }
  return result;
}

}  // namespace qkdlab
