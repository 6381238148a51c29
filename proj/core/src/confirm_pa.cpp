#include "qkdlab/confirm_pa.hpp"

#include <cmath>
#include <stdexcept>

namespace qkdlab {

namespace {

Au2FamilySpec confirm_family(unsigned width, std::size_t key_bits) {
  Au2FamilySpec f;
  f.z_bits = width;
  f.max_blocks = static_cast<unsigned>((key_bits + width - 1) / width + 2);
  return f;
}

}  // namespace

BitString confirm(const ConfirmSpec& spec, const BitString& key) {
  return poly_au2_eval(confirm_family(spec.width, key.size()), spec.point, key);
}

double confirm_epsilon(unsigned width, std::size_t key_bits) {
  return confirm_family(width, key_bits).epsilon_prime();
}

BitString pa_apply(const PaSpec& spec, const BitString& key) {
  const std::size_t m = key.size();
  if (spec.out_len == 0) return BitString(0);
  if (spec.seed.size() != m + spec.out_len - 1)
    throw std::invalid_argument("toeplitz seed must hold |key| + out_len - 1 bits");
  BitString out(spec.out_len);
  for (std::uint32_t i = 0; i < spec.out_len; ++i) {
    bool acc = false;
    for (std::size_t j = 0; j < m; ++j)
      if (key.get(j)) acc ^= spec.seed.get(i - j + m - 1);
    out.set(i, acc);
  }
  return out;
}

bool pa_solve_seed(const BitString& key, const BitString& target, PaSpec& out) {
  const std::size_t m = key.size();
  const std::size_t r = target.size();
  out.out_len = static_cast<std::uint32_t>(r);
  out.seed = BitString(r == 0 ? 0 : m + r - 1);
  if (r == 0) return true;

  std::size_t first_set = m;
  for (std::size_t j = 0; j < m; ++j)
    if (key.get(j)) { first_set = j; break; }
  if (first_set == m) return target.popcount() == 0;

  // Triangular pass: the pilot seed bit of output i touches no earlier output.
  for (std::size_t i = 0; i < r; ++i) {
    bool cur = false;
    for (std::size_t j = 0; j < m; ++j)
      if (key.get(j)) cur ^= out.seed.get(i - j + m - 1);
    if (cur != target.get(i)) out.seed.flip(i - first_set + m - 1);
  }
  return true;
}

std::size_t pa_margin(std::size_t sifted_bits) {
  if (sifted_bits >= 1024) return 128;
  return std::max<std::size_t>(4, sifted_bits / 8);
}

std::uint32_t pa_output_length(std::size_t sifted_bits, double epsilon) {
  double h2 = 0.0;
  if (epsilon > 0.0 && epsilon < 1.0) {
    double e = std::min(epsilon, 1.0 - 1e-12);
    h2 = -e * std::log2(e) - (1.0 - e) * std::log2(1.0 - e);
  }
  if (epsilon >= 0.5) h2 = 1.0;
  double rate = static_cast<double>(sifted_bits) * (1.0 - h2);
  double r = std::floor(rate) - static_cast<double>(pa_margin(sifted_bits));
  if (r < 0.0) return 0;
  return static_cast<std::uint32_t>(r);
}

}  // namespace qkdlab
