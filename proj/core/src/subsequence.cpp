#include "qkdlab/subsequence.hpp"

#include <stdexcept>

namespace qkdlab {

std::optional<std::vector<std::uint32_t>> find_subsequence(const BitString& s,
                                                           const BitString& big) {
  if (s.empty() || big.empty()) throw std::invalid_argument("sequences must be nonempty");
  std::vector<std::uint32_t> indices;
  indices.reserve(s.size());
  std::size_t i = 0, j = 0;
  const std::size_t m = s.size(), n = big.size();
  while (i < m && j < n) {
    if (s.get(i) == big.get(j)) {
      indices.push_back(static_cast<std::uint32_t>(j));
      ++i;
    }
    ++j;
  }
  if (i < m) return std::nullopt;
  return indices;
}

Rational subsequence_probability(std::uint64_t m, std::uint64_t n) {
  if (m < 1 || m > n) throw std::invalid_argument("need 1 <= m <= n");
  BigInt hits = 0;
  for (std::uint64_t l = m; l <= n; ++l) hits += binomial_big(n, l);
  return Rational(hits, pow2_big(n));
}

}  // namespace qkdlab
