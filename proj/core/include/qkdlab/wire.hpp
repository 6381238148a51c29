#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qkdlab/bitstring.hpp"
#include "qkdlab/universal_hash.hpp"

namespace qkdlab {

enum class MsgType : std::uint8_t {
  Ack = 0x12,        // fixed acknowledgement marker
  Nonce = 0x13,      // 64-bit nonce
  BasesA = 0x21,     // sender's preparation bases
  BasesB = 0x22,     // measurement bases + presence mask
  SiftMaskMsg = 0x23,  // matching-bases indicator
  EcBlock = 0x31,    // code index, syndrome, confirmation spec + value
  Status = 0x32,     // ok/fail + 16-bit error-rate field
  PaSpecMsg = 0x33,  // privacy-amplification description
};

/// Canonically framed protocol message. The frame bytes are the unique
/// authentication input; the tag travels after the frame, never inside it.
struct WireMessage {
  std::uint8_t protocol_id = 0;
  MsgType msg_type = MsgType::Ack;
  std::vector<BitString> fields;

  bool operator==(const WireMessage&) const = default;
};

/// Frame layout, bit-exact: byte 0 protocol_id; byte 1 msg_type; bytes 2-5
/// field count as 32-bit little-endian; per field a 32-bit little-endian bit
/// length followed by ceil(len/8) bytes, MSB-first and zero-padded.
std::vector<std::uint8_t> encode_frame(const WireMessage& msg);
WireMessage decode_frame(const std::vector<std::uint8_t>& bytes);

/// Frame bytes as the BitString the hashes consume.
BitString frame_bits(const WireMessage& msg);

/// Byte offset of field `index`'s payload inside the encoded frame.
std::size_t frame_field_offset(const WireMessage& msg, std::size_t index);

/// A message in transit: frame plus whatever the authentication rung attached.
struct Envelope {
  WireMessage msg;
  std::optional<Tag> tag;
  std::optional<BitString> nonce;  // nonce rungs only

  Envelope() = default;
  explicit Envelope(WireMessage m) : msg(std::move(m)) {}
};

}  // namespace qkdlab
