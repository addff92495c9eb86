#pragma once

#include <cstdint>
#include <random>

namespace fourlin {

// SplitMix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Child seed for stream `index` of `seed`. Fixed rule, so any item of a
// batch can be regenerated on its own.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

// Named streams used across the library.
enum class Stream : std::uint64_t {
  operator_draw = 1,
  train = 2,
  test = 3,
  input = 4,
  noise = 5,
  xi = 6,
  sampling = 7,
  sgd = 8,
};

constexpr std::uint64_t derive_seed(std::uint64_t seed, Stream s) {
  return derive_seed(seed, static_cast<std::uint64_t>(s) << 56);
}

using Rng = std::mt19937_64;

}  // namespace fourlin
