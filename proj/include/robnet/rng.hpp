#pragma once

#include <cstdint>
#include <initializer_list>

// Counter-based deterministic randomness. Every random decision in the
// toolkit is a pure function of (seed, counters...), so results never depend
// on call order, thread count, or platform.

namespace robnet::rng {

// SplitMix64 finalizer. Bijective on uint64.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Folds a counter into a seed. Chain to derive per-(trial, copy, round, ...)
// streams: key(key(seed, trial), copy) etc.
inline std::uint64_t key(std::uint64_t seed, std::uint64_t counter) {
  return splitmix64(seed ^ (0x9e3779b97f4a7c15ULL + splitmix64(counter)));
}

inline std::uint64_t key_path(std::uint64_t seed,
                              std::initializer_list<std::uint64_t> counters) {
  std::uint64_t h = seed;
  for (std::uint64_t c : counters) h = key(h, c);
  return h;
}

// Uniform double in [0, 1) from 53 high bits.
inline double uniform01(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace robnet::rng
