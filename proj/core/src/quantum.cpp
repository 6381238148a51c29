#include "qkdlab/quantum.hpp"

namespace qkdlab {

std::size_t RawKey::empty_count() const {
  std::size_t n = 0;
  for (auto v : values)
    if (v == kEmpty) ++n;
  return n;
}

RawKey RawKey::from_bits(const BitString& b) {
  RawKey r;
  r.values.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) r.values[i] = b.get(i) ? 1 : 0;
  return r;
}

BitString RawKey::to_bits() const {
  BitString out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == kEmpty) throw std::logic_error("raw key has empty slots");
    out.set(i, values[i] == 1);
  }
  return out;
}

BitString RawKey::presence() const {
  BitString out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out.set(i, values[i] != kEmpty);
  return out;
}

QuantumFrame frame_from_slots(std::vector<QuantumFrame::Slot> slots) {
  QuantumFrame f;
  f.slots_ = std::move(slots);
  return f;
}

QuantumFrame prepare(const RawKey& raw, const BasisString& bases) {
  if (raw.size() != bases.size()) throw std::invalid_argument("raw/bases length mismatch");
  if (raw.has_empty()) throw std::invalid_argument("cannot prepare from empty slots");
  QuantumFrame f;
  f.slots_.resize(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k)
    f.slots_[k] = {false, bases.get(k), raw.values[k] == 1};
  return f;
}

RawKey measure(QuantumFrame& frame, const BasisString& bases, const ChannelParams& params,
               Rng& rng) {
  if (frame.size() != bases.size()) throw std::invalid_argument("frame/bases length mismatch");
  if (frame.consumed_) throw std::logic_error("frame measured twice");
  frame.consumed_ = true;
  RawKey out;
  out.values.resize(frame.size());
  for (std::size_t k = 0; k < frame.size(); ++k) {
    const auto& s = frame.slots_[k];
    if (s.lost || rng.chance(params.loss_prob)) {
      out.values[k] = RawKey::kEmpty;
      continue;
    }
    bool bit;
    if (s.basis == bases.get(k)) {
      bit = s.bit ^ rng.chance(params.flip_prob);
    } else {
      bit = rng.bit();
    }
    out.values[k] = bit ? 1 : 0;
  }
  return out;
}

QuantumMemory::QuantumMemory(QuantumFrame frame) : frame_(std::move(frame)) {
  if (frame_.consumed_) throw std::logic_error("cannot store a measured frame");
}

RawKey QuantumMemory::measure_in(const BasisString& bases, Rng& rng) {
  return measure(frame_, bases, kIdealChannel, rng);
}

QuantumMemory memory_store(QuantumFrame frame) { return QuantumMemory(std::move(frame)); }

InterceptResult intercept_resend(QuantumFrame frame, const BasisString& eve_bases, Rng& rng) {
  InterceptResult r;
  r.eve_raw = measure(frame, eve_bases, kIdealChannel, rng);
  std::vector<QuantumFrame::Slot> slots(r.eve_raw.size());
  for (std::size_t k = 0; k < r.eve_raw.size(); ++k) {
    if (r.eve_raw.is_empty(k)) continue;  // stays Lost
    slots[k] = {false, eve_bases.get(k), r.eve_raw.bit(k)};
  }
  r.resent = frame_from_slots(std::move(slots));
  return r;
}

}  // namespace qkdlab
