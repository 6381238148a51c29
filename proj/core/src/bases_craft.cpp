#include "qkdlab/bases_craft.hpp"

namespace qkdlab {

CraftedMask craft_bases_mask(const BitString& raw, const BitString& target,
                             std::size_t k_budget) {
  const std::size_t n = raw.size(), m = target.size();
  if (m == 0) throw std::invalid_argument("target must be nonempty");
  if (m > n) throw std::invalid_argument("target longer than the raw key");

  CraftedMask out;
  out.mask = BitString(n);
  std::size_t j = 0;
  for (std::size_t i = 0; i < m; ++i) {
    // positions beyond this would leave too few slots for the rest of target
    std::size_t window_end = n - (m - 1 - i);
    bool want = target.get(i);
    std::size_t found = window_end;
    for (std::size_t q = j; q < window_end; ++q) {
      if (raw.get(q) == want) { found = q; break; }
    }
    if (found < window_end) {
      out.mask.set(found, true);
      j = found + 1;
    } else {
      out.mask.set(j, true);  // filler: earliest position, match impossible
      out.mismatch_positions.push_back(static_cast<std::uint32_t>(i));
      ++j;
      if (++out.mismatches > k_budget)
        throw CraftFailure("sifting-mask craft exceeded the mismatch budget");
    }
  }
  return out;
}

}  // namespace qkdlab
