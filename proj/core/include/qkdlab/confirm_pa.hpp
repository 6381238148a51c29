#pragma once

#include <cstdint>

#include "qkdlab/bitstring.hpp"
#include "qkdlab/universal_hash.hpp"

namespace qkdlab {

/// Confirmation hash: one almost-universal polynomial member, point carried
/// inside the message. Collision probability for unequal keys is at most
/// (ceil(|key|/width) + 1) / 2^width over a uniform point.
struct ConfirmSpec {
  unsigned width = 32;        // output bits
  std::uint64_t point = 0;    // family member index

  bool operator==(const ConfirmSpec&) const = default;
};

BitString confirm(const ConfirmSpec& spec, const BitString& key);
/// Published collision bound for keys of the given length.
double confirm_epsilon(unsigned width, std::size_t key_bits);

/// Privacy amplification: binary Toeplitz map. seed holds the first row and
/// first column (|key| + out_len - 1 bits); row i of the matrix is
/// T[i][j] = seed[i - j + |key| - 1].
struct PaSpec {
  std::uint32_t out_len = 0;
  BitString seed;

  bool operator==(const PaSpec&) const = default;
};

BitString pa_apply(const PaSpec& spec, const BitString& key);

/// Output bit i as a function of the seed for a fixed key: the seed indices
/// XORed together are {i - j + |key| - 1 : key_j = 1}.
/// Solves for a seed with pa_apply(seed, key) == target; the free-variable
/// pattern lets callers enumerate the whole affine solution space. Returns
/// false when key is all-zero and target isn't.
bool pa_solve_seed(const BitString& key, const BitString& target, PaSpec& out);

/// Published rate rule: out_len = max(0, floor(n*(1 - h2(eps))) - margin(n)).
std::uint32_t pa_output_length(std::size_t sifted_bits, double epsilon);
std::size_t pa_margin(std::size_t sifted_bits);

}  // namespace qkdlab
