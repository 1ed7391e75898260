#pragma once

#include <cstdint>

namespace rentire {

// Stateless counter-mode generator: every draw is a hash of (seed, index,
// lane), so any coefficient can be regenerated without replaying a prefix.

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// 64 random bits keyed by seed, addressed by (index, lane). Lanes < 4.
std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t index,
                           unsigned lane) noexcept;

/// Uniform on the open interval (0, 1); never returns 0 or 1.
double counter_uniform(std::uint64_t seed, std::uint64_t index,
                       unsigned lane) noexcept;

/// Sub-seed of replicate j: mix(seed, j) = splitmix64(splitmix64(seed) ^ j').
/// Documented so replicate streams can be reproduced outside this library.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t replicate) noexcept;

}  // namespace rentire
