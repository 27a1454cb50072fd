// Reproducible random draws for trace generation.
//
// Generator: std::mt19937_64, whose output sequence is pinned by the C++
// standard. The bounded/unit mappings below are fixed arithmetic on raw
// generator words, so generated traces are identical across platforms and
// standard libraries (std::uniform_int_distribution makes no such promise).
#pragma once

#include <cstdint>
#include <random>

namespace pfsim {

// Multiply-high mapping of one generator word onto [0, n). n must be > 0.
inline uint64_t bounded_draw(std::mt19937_64& rng, uint64_t n) {
  return static_cast<uint64_t>(
      (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

// 53-bit mantissa draw in [0, 1).
inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace pfsim
