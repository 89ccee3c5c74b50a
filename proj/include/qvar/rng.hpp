#pragma once

#include <cstdint>
#include <random>

namespace qvar {

// Streams are std::mt19937_64 (bit-exact by the C++ standard) seeded through
// SplitMix64, so every derived value below is reproducible on any platform.
// std::*_distribution is avoided because its output is implementation-defined.

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class StreamId : std::uint64_t {
  kArrivals = 1,
  kService = 2,
  kDecisions = 3,
};

inline std::mt19937_64 MakeStream(std::uint64_t seed, StreamId id) {
  return std::mt19937_64(
      SplitMix64(SplitMix64(seed) ^ static_cast<std::uint64_t>(id)));
}

/// U in (0, 1]: top 53 bits, shifted up by one ulp.
inline double UnitInterval(std::mt19937_64& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

/// Uniform in [0, m) by rejection; m > 0.
inline std::uint64_t UniformIndex(std::mt19937_64& rng, std::uint64_t m) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % m;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % m;
}

}  // namespace qvar
