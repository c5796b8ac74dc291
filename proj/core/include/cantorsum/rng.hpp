#pragma once

#include <cstdint>

#include "cantorsum/rational.hpp"

namespace cantorsum {

// Counter-based generator: every value is a pure function of (seed, draw,
// component, lane), so draws are reproducible under any parallel schedule.
namespace rng {

inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t value(std::uint64_t seed, std::uint64_t draw,
                           std::uint64_t component, std::uint64_t lane) {
  return mix(mix(mix(mix(seed) ^ draw) ^ component) ^ lane);
}

// Uniform on the dyadic grid {k/2^16 : |k| <= 2^16}, by rejection.
inline Rational dyadic_component(std::uint64_t seed, std::uint64_t draw,
                                 std::uint64_t component) {
  constexpr std::uint64_t kValues = 2ULL * 65536ULL + 1ULL;  // 131073
  constexpr std::uint64_t kLimit = UINT64_MAX - UINT64_MAX % kValues;
  for (std::uint64_t lane = 0;; ++lane) {
    std::uint64_t v = value(seed, draw, component, lane);
    if (v >= kLimit) continue;
    long k = static_cast<long>(v % kValues) - 65536L;
    return rat(k, 65536L);
  }
}

}  // namespace rng
}  // namespace cantorsum
