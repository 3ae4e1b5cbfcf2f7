#pragma once

#include <cstdint>

namespace dsbn::detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stateless draw keyed by (seed, stream, index): the same key always yields the
// same value, independent of the order in which keys are visited.
inline double keyed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ stream);
  h = mix64(h ^ index);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

enum Stream : std::uint64_t {
  kDrawStream = 1,
  kRelabelStream = 2,
};

}  // namespace dsbn::detail
