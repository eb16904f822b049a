#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "mhinr/nn/tensor.hpp"

namespace mhinr::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second moment buffers for a fixed list of parameter tensors.
class AdamState {
 public:
  AdamState() = default;
  AdamState(std::span<Tensor* const> params, AdamConfig config) : config_(config) {
    first_.reserve(params.size());
    second_.reserve(params.size());
    for (const Tensor* p : params) {
      first_.emplace_back(p->size(), 0.0);
      second_.emplace_back(p->size(), 0.0);
    }
  }

  const AdamConfig& config() const { return config_; }
  std::size_t step_count() const { return steps_; }
  std::size_t tensor_count() const { return first_.size(); }

  // Standard bias-corrected Adam update of every tensor from its grad buffer.
  void step(std::span<Tensor* const> params) {
    detail::require(params.size() == first_.size(), "adam_step: parameter list does not match optimizer state");
    ++steps_;
    const double t = static_cast<double>(steps_);
    const double correction1 = 1.0 - std::pow(config_.beta1, t);
    const double correction2 = 1.0 - std::pow(config_.beta2, t);
    for (std::size_t k = 0; k < params.size(); ++k) {
      Tensor& p = *params[k];
      detail::require(p.size() == first_[k].size(), "adam_step: parameter " + std::to_string(k) + " changed shape");
      auto values = p.values();
      const auto grads = p.grad();
      auto& m = first_[k];
      auto& v = second_[k];
      for (std::size_t i = 0; i < values.size(); ++i) {
        const double g = grads[i];
        m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g;
        v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g * g;
        const double m_hat = m[i] / correction1;
        const double v_hat = v[i] / correction2;
        values[i] -= config_.lr * m_hat / (std::sqrt(v_hat) + config_.eps);
      }
    }
  }

 private:
  AdamConfig config_;
  std::vector<std::vector<double>> first_;
  std::vector<std::vector<double>> second_;
  std::size_t steps_ = 0;
};

inline void adam_step(std::span<Tensor* const> params, AdamState& state) { state.step(params); }

}  // namespace mhinr::nn
