#include "siou/random.hpp"

#include <array>

namespace siou {

Engine make_engine(const RngSeed& seed, std::uint64_t substream) {
  const std::array<std::uint32_t, 6> words{
      static_cast<std::uint32_t>(seed.seed),   static_cast<std::uint32_t>(seed.seed >> 32),
      static_cast<std::uint32_t>(seed.stream), static_cast<std::uint32_t>(seed.stream >> 32),
      static_cast<std::uint32_t>(substream),   static_cast<std::uint32_t>(substream >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  return Engine(seq);
}

}  // namespace siou
