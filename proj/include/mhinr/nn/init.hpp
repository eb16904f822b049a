#pragma once

#include <cmath>
#include <cstddef>

#include "mhinr/nn/rng.hpp"
#include "mhinr/nn/tensor.hpp"

namespace mhinr::nn {

/// Tensor of iid U[lo, hi) entries, drawn in row-major order.
inline Tensor init_uniform(std::size_t rows, std::size_t cols, double lo, double hi, Rng& rng) {
  detail::require(lo < hi, "init_uniform: lo must be < hi");
  Tensor t(rows, cols);
  for (double& v : t.values()) v = rng.uniform(lo, hi);
  return t;
}

/// Tensor of iid N(0, sigma^2) entries, drawn in row-major order.
inline Tensor init_normal(std::size_t rows, std::size_t cols, double sigma, Rng& rng) {
  Tensor t(rows, cols);
  for (double& v : t.values()) v = sigma * rng.normal();
  return t;
}

/// Symmetric fan-in bound sqrt(1/fan_in).
inline double fan_in_bound(std::size_t fan_in) { return std::sqrt(1.0 / static_cast<double>(fan_in)); }

}  // namespace mhinr::nn
