#pragma once

#include <cmath>
#include <cstddef>

#include "mhinr/nn/tensor.hpp"

namespace mhinr::nn {

// Mean squared error over every element. Writes the gradient seed
// dL/dpred = 2 (pred - target) / n into pred.grad and returns the loss.
inline double mse_loss(Tensor& pred, const Tensor& target) {
  detail::require(pred.same_shape(target), "mse_loss: shape mismatch " + pred.shape_string() + " vs " +
                                               target.shape_string());
  detail::require(pred.size() > 0, "mse_loss: empty tensors");
  const auto p = pred.values();
  const auto t = target.values();
  auto g = pred.grad();
  const double n = static_cast<double>(p.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - t[i];
    sum += d * d;
    g[i] = 2.0 * d / n;
  }
  const double loss = sum / n;
  if (!std::isfinite(loss)) throw NumericError("mse_loss: non-finite loss");
  return loss;
}

/// Loss value only; leaves gradients untouched.
inline double mse_value(const Tensor& pred, const Tensor& target) {
  detail::require(pred.same_shape(target), "mse_value: shape mismatch");
  const auto p = pred.values();
  const auto t = target.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += (p[i] - t[i]) * (p[i] - t[i]);
  return sum / static_cast<double>(p.size());
}

}  // namespace mhinr::nn
