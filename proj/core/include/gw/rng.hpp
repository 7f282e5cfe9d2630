#pragma once

#include <cstdint>
#include <random>

namespace gw {

// Deterministic random source. Draws come from the standard mt19937_64
// stream and the uniform [0,1) conversion is done by bit twiddling, so the
// same seed yields the same samples on every platform. Independent streams
// are derived by splitmix64 mixing of (base seed, stream index).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double next_u01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gw
