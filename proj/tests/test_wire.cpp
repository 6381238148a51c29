#include "doctest.h"
#include "qkdlab/wire.hpp"
#include "qkdlab/rng.hpp"

using namespace qkdlab;

TEST_CASE("frame layout is bit exact") {
  WireMessage msg;
  msg.protocol_id = 1;
  msg.msg_type = MsgType::BasesA;
  msg.fields = {BitString::from_string("101"), BitString::from_string("11110000101")};
  auto bytes = encode_frame(msg);
  // header
  REQUIRE(bytes.size() == 6 + 4 + 1 + 4 + 2);
  CHECK(bytes[0] == 1);
  CHECK(bytes[1] == 0x21);
  CHECK(bytes[2] == 2);  // field count LE
  CHECK(bytes[3] == 0);
  CHECK(bytes[4] == 0);
  CHECK(bytes[5] == 0);
  // field 0: 3 bits, payload 0b101 MSB-first zero padded
  CHECK(bytes[6] == 3);
  CHECK(bytes[10] == 0xa0);
  // field 1: 11 bits
  CHECK(bytes[11] == 11);
  CHECK(bytes[15] == 0xf0);
  CHECK(bytes[16] == 0xa0);
}

TEST_CASE("frame field offsets") {
  WireMessage msg;
  msg.msg_type = MsgType::EcBlock;
  msg.fields = {BitString(8), BitString(24), BitString(32)};
  CHECK(frame_field_offset(msg, 0) == 10);
  CHECK(frame_field_offset(msg, 1) == 15);
  CHECK(frame_field_offset(msg, 2) == 22);
}

TEST_CASE("round trip is lossless over random frames") {
  Rng rng(21);
  for (int i = 0; i < 100; ++i) {
    WireMessage msg;
    msg.protocol_id = static_cast<std::uint8_t>(rng.below(8));
    msg.msg_type = MsgType::Status;
    std::size_t nf = rng.below(4);
    for (std::size_t f = 0; f < nf; ++f) msg.fields.push_back(rng.bits(rng.below(70)));
    CHECK(decode_frame(encode_frame(msg)) == msg);
  }
}

TEST_CASE("truncated and trailing bytes are rejected") {
  WireMessage msg;
  msg.msg_type = MsgType::Ack;
  msg.fields = {BitString::from_uint(0xa5, 8)};
  auto bytes = encode_frame(msg);
  auto cut = bytes;
  cut.pop_back();
  CHECK_THROWS(decode_frame(cut));
  bytes.push_back(0);
  CHECK_THROWS(decode_frame(bytes));
}
