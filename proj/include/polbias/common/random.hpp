#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace polbias {

// Derives an independent 64-bit seed for a named substream, e.g.
// derive_seed(root, {"stance", model, topic}). Stable across platforms.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::string_view> parts);

using RandomStream = std::mt19937_64;

inline RandomStream make_stream(std::uint64_t root, std::initializer_list<std::string_view> parts) {
  return RandomStream(derive_seed(root, parts));
}

// Uniform index in [0, n) from raw engine bits; avoids the
// implementation-defined std::uniform_int_distribution.
inline std::size_t pick_index(RandomStream& rng, std::size_t n) {
  return n == 0 ? 0 : static_cast<std::size_t>(rng() % n);
}

// Uniform double in [0, 1) built from the top 53 bits.
inline double unit_uniform(RandomStream& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace polbias
