#include "qkdlab/wire.hpp"

#include <stdexcept>

namespace qkdlab {

namespace {

void put_le32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 24));
}

std::uint32_t get_le32(const std::vector<std::uint8_t>& b, std::size_t at) {
  if (at + 4 > b.size()) throw std::invalid_argument("truncated frame");
  return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 | static_cast<std::uint32_t>(b[at + 3]) << 24;
}

}  // namespace

std::vector<std::uint8_t> encode_frame(const WireMessage& msg) {
  std::vector<std::uint8_t> out;
  out.push_back(msg.protocol_id);
  out.push_back(static_cast<std::uint8_t>(msg.msg_type));
  put_le32(out, static_cast<std::uint32_t>(msg.fields.size()));
  for (const auto& f : msg.fields) {
    put_le32(out, static_cast<std::uint32_t>(f.size()));
    out.insert(out.end(), f.bytes().begin(), f.bytes().end());
  }
  return out;
}

WireMessage decode_frame(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 6) throw std::invalid_argument("truncated frame");
  WireMessage msg;
  msg.protocol_id = bytes[0];
  msg.msg_type = static_cast<MsgType>(bytes[1]);
  std::uint32_t nfields = get_le32(bytes, 2);
  std::size_t at = 6;
  for (std::uint32_t i = 0; i < nfields; ++i) {
    std::uint32_t nbits = get_le32(bytes, at);
    at += 4;
    std::size_t nbytes = (nbits + 7) / 8;
    if (at + nbytes > bytes.size()) throw std::invalid_argument("truncated frame");
    msg.fields.push_back(BitString::from_bytes(
        std::vector<std::uint8_t>(bytes.begin() + at, bytes.begin() + at + nbytes), nbits));
    at += nbytes;
  }
  if (at != bytes.size()) throw std::invalid_argument("trailing bytes after frame");
  return msg;
}

BitString frame_bits(const WireMessage& msg) {
  auto bytes = encode_frame(msg);
  std::size_t nbits = bytes.size() * 8;
  return BitString::from_bytes(std::move(bytes), nbits);
}

std::size_t frame_field_offset(const WireMessage& msg, std::size_t index) {
  if (index >= msg.fields.size()) throw std::out_of_range("field index");
  std::size_t at = 6;
  for (std::size_t i = 0; i < index; ++i) at += 4 + (msg.fields[i].size() + 7) / 8;
  return at + 4;
}

}  // namespace qkdlab
