#pragma once

#include <cstdint>
#include <random>

namespace abacus {

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound). Lemire's multiply-shift with rejection, so
/// the draw sequence is identical across standard library implementations
/// (std::uniform_int_distribution is not).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  using u128 = unsigned __int128;
  u128 m = static_cast<u128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Exact Bernoulli(numerator / denominator) with one draw.
inline bool bernoulli(Rng& rng, std::uint64_t numerator,
                      std::uint64_t denominator) {
  return uniform_index(rng, denominator) < numerator;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace abacus
