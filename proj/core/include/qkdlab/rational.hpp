#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace qkdlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt binomial_big(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    r *= BigInt(n - i);
    r /= BigInt(i + 1);
  }
  return r;
}

inline BigInt pow2_big(std::uint64_t e) {
  BigInt r = 1;
  r <<= e;
  return r;
}

inline double rational_to_double(const Rational& r) {
  return static_cast<double>(r);
}

}  // namespace qkdlab
