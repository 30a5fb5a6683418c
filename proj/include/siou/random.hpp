#ifndef SIOU_RANDOM_HPP_
#define SIOU_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace siou {

/// (seed, stream) fully determines a random sequence.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

using Engine = std::mt19937_64;

/// Engine for one (seed, stream, substream) triple. Monte Carlo replicate r
/// draws from substream r, so results do not depend on the thread count.
Engine make_engine(const RngSeed& seed, std::uint64_t substream = 0);

/// Standard normals come from std::normal_distribution (Marsaglia polar method
/// in libstdc++), which is stable on one platform.
using StandardNormal = std::normal_distribution<double>;

}  // namespace siou

#endif  // SIOU_RANDOM_HPP_
