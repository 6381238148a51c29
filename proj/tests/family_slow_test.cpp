#include "doctest.h"
#include "qkdlab/family_verify.hpp"
#include "qkdlab/universal_hash.hpp"

using namespace qkdlab;

TEST_CASE("the truncated affine family verifies strongly universal across widths") {
    // every (z, t) with z <= 8 whose |Z|*|H| load stays within the guard
    for (unsigned z = 1; z <= 8; ++z) {
        for (unsigned t = 1; t <= z; ++t) {
            auto fam = make_su2_affine_family(z, t);
            CAPTURE(z);
            CAPTURE(t);
            auto v = verify_family(fam, FamilyKind::SU2,
                                   Rational(1, pow2_big(t)));
            CHECK(v.verdict);
            CHECK(v.measured_epsilon == Rational(1, pow2_big(t)));
        }
    }
}

TEST_CASE("the polynomial family verifies almost universal at its advertised fraction") {
    // full message space (all lengths within capacity) for z <= 6
    struct Cfg { unsigned z, mb; };
    for (Cfg c : {Cfg{4, 3}, Cfg{4, 4}, Cfg{5, 3}, Cfg{5, 4}, Cfg{6, 3}}) {
        Au2FamilySpec spec{c.z, c.mb};
        std::vector<BitString> msgs;
        for (std::size_t len = 0; len <= spec.capacity_bits(); ++len)
            for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v)
                msgs.push_back(BitString::from_uint(v, len));
        auto fam = make_poly_family(spec, std::move(msgs));
        CAPTURE(c.z);
        CAPTURE(c.mb);
        auto v = verify_family(fam, FamilyKind::AU2,
                               Rational(c.mb - 1, pow2_big(c.z)));
        CHECK(v.verdict);
    }
}
