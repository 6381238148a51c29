#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "qkdlab/bitstring.hpp"
#include "qkdlab/rng.hpp"

namespace qkdlab {

/// 0 = rectilinear, 1 = diagonal.
using BasisString = BitString;

/// Per-slot measurement results; a slot is empty when no result registered.
struct RawKey {
  std::vector<std::int8_t> values;  // 0, 1 or kEmpty

  static constexpr std::int8_t kEmpty = -1;

  std::size_t size() const { return values.size(); }
  bool is_empty(std::size_t k) const { return values[k] == kEmpty; }
  bool bit(std::size_t k) const { return values[k] == 1; }
  std::size_t empty_count() const;
  bool has_empty() const { return empty_count() != 0; }

  static RawKey from_bits(const BitString& b);
  /// Throws if any slot is empty.
  BitString to_bits() const;
  /// 1-bits mark slots holding a result.
  BitString presence() const;
};

struct ChannelParams {
  double loss_prob = 0.0;  // applied i.i.d. per slot, before flips
  double flip_prob = 0.0;
};

constexpr ChannelParams kIdealChannel{0.0, 0.0};

/// Ideal conjugate-coding signal string: one (basis, bit) slot per time slot,
/// or Lost. Single-owner and consumed by exactly one measurement.
class QuantumFrame {
 public:
  struct Slot {
    bool lost = true;
    bool basis = false;
    bool bit = false;
  };

  QuantumFrame() = default;
  QuantumFrame(const QuantumFrame&) = delete;
  QuantumFrame& operator=(const QuantumFrame&) = delete;
  QuantumFrame(QuantumFrame&&) = default;
  QuantumFrame& operator=(QuantumFrame&&) = default;

  std::size_t size() const { return slots_.size(); }
  const std::vector<Slot>& slots() const { return slots_; }
  bool consumed() const { return consumed_; }

 private:
  friend QuantumFrame prepare(const RawKey&, const BasisString&);
  friend RawKey measure(QuantumFrame&, const BasisString&, const ChannelParams&, Rng&);
  friend class QuantumMemory;
  friend QuantumFrame frame_from_slots(std::vector<Slot> slots);

  std::vector<Slot> slots_;
  bool consumed_ = false;
};

QuantumFrame frame_from_slots(std::vector<QuantumFrame::Slot> slots);

/// Encodes (raw_k, bases_k) into one signal per slot. The raw key must carry
/// a result in every slot.
QuantumFrame prepare(const RawKey& raw, const BasisString& bases);

/// Destructive measurement. Lost slots and loss draws give empty; a matching
/// basis returns the prepared bit xor a flip draw; a mismatched basis returns
/// a uniform bit. Throws on a second measurement of the same frame.
RawKey measure(QuantumFrame& frame, const BasisString& bases, const ChannelParams& params,
               Rng& rng);

/// Perfect single-use quantum storage: measure later, in bases learned later.
class QuantumMemory {
 public:
  explicit QuantumMemory(QuantumFrame frame);
  RawKey measure_in(const BasisString& bases, Rng& rng);
  std::size_t size() const { return frame_.size(); }

 private:
  QuantumFrame frame_;
};

QuantumMemory memory_store(QuantumFrame frame);

/// Measure in eve_bases with ideal instruments and re-prepare the results in
/// the same bases; empty slots are forwarded as Lost.
struct InterceptResult {
  RawKey eve_raw;
  QuantumFrame resent;
};
InterceptResult intercept_resend(QuantumFrame frame, const BasisString& eve_bases, Rng& rng);

}  // namespace qkdlab
