#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace truncaug {

/// Independent mt19937_64 substream for (seed, stream), e.g. one per
/// simulation cycle or per study grid point. std::seed_seq and the engine
/// are fully specified by the standard, so streams are portable.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

/// Uniform on [0, 1) from the top 53 bits (portable, unlike
/// std::uniform_real_distribution).
inline double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Exp(1) variate by inversion.
inline double exponential1(std::mt19937_64& engine) {
  return -std::log1p(-uniform01(engine));
}

}  // namespace truncaug
