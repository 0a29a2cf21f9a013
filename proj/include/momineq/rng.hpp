#pragma once

// Counter-based random source. Every variate is a pure function of
// (seed, sample index, coordinate index, substream), so draws are
// order-independent and reproducible under any parallel schedule.

#include <cmath>
#include <cstdint>

namespace momineq::rng {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer.
inline constexpr std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

inline constexpr std::uint64_t key(std::uint64_t seed, std::uint64_t j,
                                   std::uint64_t i, std::uint64_t sub = 0) {
  std::uint64_t h = mix(seed + kGamma);
  h = mix(h ^ (j + kGamma));
  h = mix(h ^ (i + kGamma));
  h = mix(h ^ (sub + kGamma));
  return h;
}

// Derive an unrelated seed for an auxiliary stream (e.g. a centering pass).
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix(seed ^ mix(tag + kGamma));
}

// [0, 1)
inline double uniform01(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// (0, 1]
inline double uniform01_open(std::uint64_t h) {
  return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
}

// Box-Muller from two independent keys.
inline double gaussian(std::uint64_t k0, std::uint64_t k1) {
  const double u1 = uniform01_open(k0);
  const double u2 = uniform01(k1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(6.28318530717958647692528677 * u2);
}

}  // namespace momineq::rng
