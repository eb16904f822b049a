#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "mhinr/error.hpp"

namespace mhinr::nn {

// Seeded generator backed by std::mt19937_64, whose output sequence is fixed
// by the C++ standard. All derived draws (uniform doubles, integers, normals)
// are computed here from raw 64-bit words rather than through <random>
// distributions, whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random mantissa bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) {
    detail::require(lo < hi, "Rng::uniform: lo must be < hi");
    return lo + (hi - lo) * uniform01();
  }

  /// Uniform integer in [0, n), by rejection so there is no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    detail::require(n > 0, "Rng::below: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  /// Standard normal via Box-Muller; one draw per call (two uniforms).
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// `count` distinct values from [0, n), drawn with a partial Fisher-Yates shuffle.
  std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t count) {
    detail::require(count <= n, "Rng::sample_without_replacement: count exceeds population");
    std::vector<std::uint32_t> pool(n);
    for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
    for (std::uint32_t i = 0; i < count; ++i) {
      const auto j = i + static_cast<std::uint32_t>(below(n - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace mhinr::nn
