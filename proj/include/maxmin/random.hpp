#pragma once

// Portable seeded randomness. std::uniform_int_distribution and std::shuffle
// are implementation-defined, so generators and samplers use these instead
// to keep outputs identical across standard libraries.

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace maxmin {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent seed for sub-task `index` of a run seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Uniform integer in [0, bound), bound > 0, by rejection.
template <class Engine>
std::uint64_t uniform_below(Engine& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

template <class Engine, class T>
void shuffle(std::span<T> items, Engine& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = uniform_below(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

/// Uniform double in [0, 1).
template <class Engine>
double uniform_unit(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace maxmin
