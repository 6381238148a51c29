#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qkdlab/bitstring.hpp"
#include "qkdlab/rational.hpp"

namespace qkdlab {

/// Greedy first-match scan: returns the index set J = {j_i : big[j_i] = s_i},
/// strictly increasing (0-based), or nothing when `big` is exhausted before
/// all of `s` is placed. Both inputs must be nonempty.
std::optional<std::vector<std::uint32_t>> find_subsequence(const BitString& s,
                                                           const BitString& big);

/// Probability that a uniform m-bit string is a subsequence of a uniform
/// n-bit string: 2^-n * sum_{l=m..n} C(n, l), exact.
Rational subsequence_probability(std::uint64_t m, std::uint64_t n);

}  // namespace qkdlab
