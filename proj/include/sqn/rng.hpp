#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace sqn {

// mt19937_64 output is specified by the standard, so runs seeded the same way
// reproduce bit-for-bit on any conforming implementation.  The distribution
// helpers below are hand-rolled for the same reason: std::*_distribution is
// implementation-defined.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1), 53-bit resolution.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

/// Uniform integer in [0, n); rejection sampling keeps it unbiased.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

/// Standard normal via Box-Muller; consumes exactly two engine draws.
inline double standard_normal(Rng& rng) {
  // u1 in (0, 1] so the log is finite.
  const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace sqn
