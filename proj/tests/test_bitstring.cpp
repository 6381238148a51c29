#include "doctest.h"
#include "qkdlab/bitstring.hpp"

using qkdlab::BitString;

TEST_CASE("bitstring basics") {
    BitString b = BitString::from_string("10110");
    CHECK(b.size() == 5);
    CHECK(b.get(0));
    CHECK(!b.get(1));
    CHECK(b.popcount() == 3);
    CHECK(b.to_string() == "10110");
    CHECK(b.read_uint(0, 5) == 0b10110);
}
