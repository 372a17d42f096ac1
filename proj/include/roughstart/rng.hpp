#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace roughstart::rng {

/// SplitMix64 finalizer.
inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream key for (seed, stream, item); distinct inputs give independent keys.
inline std::uint64_t key(std::uint64_t seed, std::uint64_t stream, std::uint64_t item) {
  return mix(mix(mix(seed) ^ stream) ^ item);
}

/// Counter-based bit generator: the n-th output is mix(key + n).
/// Satisfies UniformRandomBitGenerator, so std distributions apply.
class CounterEngine {
 public:
  using result_type = std::uint64_t;
  explicit CounterEngine(std::uint64_t key) : key_(key) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return mix(key_ + 0x632be59bd9b4e019ULL * ++counter_); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Two independent standard normals for the given key.
inline std::pair<double, double> normal_pair(std::uint64_t k) {
  CounterEngine eng(k);
  std::normal_distribution<double> n(0.0, 1.0);
  const double a = n(eng);
  const double b = n(eng);
  return {a, b};
}

/// Wave vector encoded as a stream item independent of the lattice size.
inline std::uint64_t wave_item(int k0, int k1) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(k0 + (1 << 30))) << 32) |
         static_cast<std::uint32_t>(k1 + (1 << 30));
}

}  // namespace roughstart::rng
