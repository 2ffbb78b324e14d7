#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace subflow {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream per (seed, path, stream) so that paths can be
/// generated in any order and on any thread with identical results.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t path, std::uint64_t stream)
      : engine_(splitmix64(splitmix64(splitmix64(seed) ^ path) ^ (stream + 1))) {}

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exp(1).
  double exponential() { return -std::log(uniform()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace subflow
