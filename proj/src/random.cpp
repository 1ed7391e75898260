#include "rentire/random.hpp"

namespace rentire {

std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t index,
                           unsigned lane) noexcept {
  const std::uint64_t key = splitmix64(seed ^ 0x5851f42d4c957f2dULL);
  const std::uint64_t ctr = splitmix64((index << 2) | (lane & 3u));
  return splitmix64(key ^ splitmix64(ctr + key));
}

double counter_uniform(std::uint64_t seed, std::uint64_t index,
                       unsigned lane) noexcept {
  // 53 mantissa bits, shifted half a step off zero.
  const std::uint64_t bits = counter_bits(seed, index, lane) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t replicate) noexcept {
  return splitmix64(splitmix64(seed) ^ (replicate * 0xd1b54a32d192ed03ULL + 1));
}

}  // namespace rentire
