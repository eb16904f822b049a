#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "mhinr/nn/rng.hpp"
#include "mhinr/signal/image.hpp"

namespace mhinr::signal {

struct PerlinSpec {
  std::size_t octaves = 1;
  double base_frequency = 2.0;  // lattice cells across the image at octave 0
  double persistence = 0.5;
  double lacunarity = 2.0;
  std::uint64_t seed = 0;

  void validate() const {
    detail::require(octaves >= 1, "PerlinSpec: octaves must be >= 1");
    detail::require(persistence > 0.0 && persistence <= 1.0, "PerlinSpec: persistence must be in (0, 1]");
    detail::require(lacunarity > 1.0, "PerlinSpec: lacunarity must be > 1");
    detail::require(base_frequency > 0.0, "PerlinSpec: base_frequency must be positive");
  }
};

/// Quintic fade 6t^5 - 15t^4 + 10t^3.
constexpr double perlin_fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

// Improved gradient noise in 2-D over a seeded permutation of 0..255.
// Values vanish at integer lattice points.
class PerlinNoise {
 public:
  explicit PerlinNoise(std::uint64_t seed) {
    std::array<int, 256> p{};
    for (int i = 0; i < 256; ++i) p[static_cast<std::size_t>(i)] = i;
    nn::Rng rng(seed);
    for (std::size_t i = 255; i > 0; --i) std::swap(p[i], p[static_cast<std::size_t>(rng.below(i + 1))]);
    for (std::size_t i = 0; i < 512; ++i) perm_[i] = p[i & 255];
  }

  double operator()(double x, double y) const {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const int xi = static_cast<int>(static_cast<std::int64_t>(fx) & 255);
    const int yi = static_cast<int>(static_cast<std::int64_t>(fy) & 255);
    const double dx = x - fx;
    const double dy = y - fy;
    const double u = perlin_fade(dx);
    const double v = perlin_fade(dy);
    const int aa = perm_[static_cast<std::size_t>(perm_[static_cast<std::size_t>(xi)] + yi)];
    const int ab = perm_[static_cast<std::size_t>(perm_[static_cast<std::size_t>(xi)] + yi + 1)];
    const int ba = perm_[static_cast<std::size_t>(perm_[static_cast<std::size_t>(xi + 1)] + yi)];
    const int bb = perm_[static_cast<std::size_t>(perm_[static_cast<std::size_t>(xi + 1)] + yi + 1)];
    const double x1 = lerp(u, grad(aa, dx, dy), grad(ba, dx - 1.0, dy));
    const double x2 = lerp(u, grad(ab, dx, dy - 1.0), grad(bb, dx - 1.0, dy - 1.0));
    return lerp(v, x1, x2);
  }

 private:
  static double lerp(double t, double a, double b) { return a + t * (b - a); }

  // Eight gradient directions: the four axes and the four diagonals.
  static double grad(int hash, double x, double y) {
    switch (hash & 7) {
      case 0: return x + y;
      case 1: return -x + y;
      case 2: return x - y;
      case 3: return -x - y;
      case 4: return x;
      case 5: return -x;
      case 6: return y;
      default: return -y;
    }
  }

  std::array<int, 512> perm_{};
};

/// Un-normalized fractal sum at image-relative position (u, v) in [0, 1]^2.
inline double perlin_fractal(const PerlinNoise& noise, const PerlinSpec& spec, double u, double v) {
  double sum = 0.0;
  double amplitude = 1.0;
  double frequency = spec.base_frequency;
  for (std::size_t o = 0; o < spec.octaves; ++o) {
    sum += amplitude * noise(u * frequency, v * frequency);
    amplitude *= spec.persistence;
    frequency *= spec.lacunarity;
  }
  return sum;
}

// Fractal Perlin image sampled at pixel centres, min-max rescaled to [0, 1].
inline Image perlin2d(const PerlinSpec& spec, std::size_t rows, std::size_t cols) {
  spec.validate();
  detail::require(rows >= 1 && cols >= 1, "perlin2d: empty image");
  const PerlinNoise noise(spec.seed);
  std::vector<double> raw(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const double v = (static_cast<double>(r) + 0.5) / static_cast<double>(rows);
    for (std::size_t c = 0; c < cols; ++c) {
      const double u = (static_cast<double>(c) + 0.5) / static_cast<double>(cols);
      raw[r * cols + c] = perlin_fractal(noise, spec, u, v);
    }
  }
  double lo = raw[0];
  double hi = raw[0];
  for (double x : raw) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  const double span = hi - lo;
  for (double& x : raw) x = span > 0.0 ? std::clamp((x - lo) / span, 0.0, 1.0) : 0.5;
  return Image(rows, cols, std::move(raw));
}

/// Mean absolute horizontal finite difference; a simple roughness measure.
inline double mean_abs_dx(const Image& img) {
  if (img.cols() < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t r = 0; r < img.rows(); ++r) {
    for (std::size_t c = 0; c + 1 < img.cols(); ++c) sum += std::abs(img.at(r, c + 1) - img.at(r, c));
  }
  return sum / static_cast<double>(img.rows() * (img.cols() - 1));
}

}  // namespace mhinr::signal
