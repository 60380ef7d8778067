#pragma once

#include <cstdint>
#include <random>

namespace semilevy {

/// Random source used throughout. Each Monte Carlo unit (path, walk, sample block)
/// owns one, seeded by stream_seed(master, index).
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Splitting rule: seed_i = splitmix64(master ^ splitmix64(i + 1)).
/// Streams for distinct indices are decorrelated, and the mapping is a pure
/// function of (master, index), so results do not depend on thread count.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 1));
}

inline Rng make_stream(std::uint64_t master, std::uint64_t index) {
  return Rng(stream_seed(master, index));
}

} // namespace semilevy
