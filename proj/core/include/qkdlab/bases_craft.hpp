#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qkdlab/bitstring.hpp"

namespace qkdlab {

struct CraftFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CraftedMask {
  BitString mask;                       // |raw| bits, exactly |target| ones
  std::vector<std::uint32_t> mismatch_positions;  // target indices filled, not matched
  std::size_t mismatches = 0;
};

/// Builds a selection mask over `raw` so that raw restricted to the mask
/// reproduces `target` except at `mismatches` filled indices. Greedy
/// first-match with a feasibility window: for target index i only positions
/// leaving one slot per remaining target bit are scanned; when the needed bit
/// does not occur there, the earliest position is taken as a filler. Fillers
/// keep the selection aligned, so each one costs exactly one key bit.
/// Throws CraftFailure when more than k_budget fillers would be needed.
CraftedMask craft_bases_mask(const BitString& raw, const BitString& target,
                             std::size_t k_budget);

}  // namespace qkdlab
