#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace clbic {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the independent stream identified by (seed, tags...). Streams for
/// different tag tuples do not depend on each other or on evaluation order.
inline std::uint64_t stream_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t t : tags) h = splitmix64(h ^ splitmix64(t + 0x632be59bd9b4e019ULL));
  return h;
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

// Stream purposes.
inline constexpr std::uint64_t kStreamGraph = 1;
inline constexpr std::uint64_t kStreamOmega = 2;
inline constexpr std::uint64_t kStreamCluster = 3;

}  // namespace clbic
