#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace stgain {

// mt19937_64 output is fixed by the standard; the distribution helpers
// below are written out so sequences do not depend on the standard
// library implementation.
using Rng = std::mt19937_64;

// Uniform integer in [0, n). n must be > 0.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  const std::uint64_t bound = n;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

// Uniform real in [0, 1) with 53 bits of precision.
inline double uniform_real(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = uniform_index(rng, i);
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace stgain
