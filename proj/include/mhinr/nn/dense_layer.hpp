#pragma once

#include <cstddef>
#include <utility>

#include "mhinr/nn/activation.hpp"
#include "mhinr/nn/tensor.hpp"

namespace mhinr::nn {

// Fully connected layer on column batches: y = act(W x + b) with x in×B, y out×B.
class DenseLayer {
 public:
  DenseLayer() = default;
  DenseLayer(Tensor weight, Tensor bias, Activation activation)
      : weight_(std::move(weight)), bias_(std::move(bias)), activation_(activation) {
    detail::require(bias_.rows() == weight_.rows() && bias_.cols() == 1,
                    "DenseLayer: bias must be out x 1, got " + bias_.shape_string());
  }

  std::size_t in_width() const { return weight_.cols(); }
  std::size_t out_width() const { return weight_.rows(); }
  const Activation& activation() const { return activation_; }

  Tensor& weight() { return weight_; }
  const Tensor& weight() const { return weight_; }
  Tensor& bias() { return bias_; }
  const Tensor& bias() const { return bias_; }

  std::size_t parameter_count() const { return weight_.size() + bias_.size(); }

  /// Writes act(W x + b) into y and caches the pre-activation for backward.
  void forward(const Tensor& x, Tensor& y) {
    detail::require(x.rows() == in_width(), "DenseLayer::forward: input has " + std::to_string(x.rows()) +
                                                " rows, layer expects " + std::to_string(in_width()));
    const auto batch = static_cast<Eigen::Index>(x.cols());
    pre_.resize(static_cast<Eigen::Index>(out_width()), batch);
    pre_.noalias() = weight_.matrix() * x.matrix();
    pre_.colwise() += bias_.matrix().col(0);
    y.resize(out_width(), x.cols());
    auto out = y.matrix();
    switch (activation_.kind) {
      case ActivationKind::Identity: out = pre_; break;
      case ActivationKind::ReLU: out = pre_.cwiseMax(0.0); break;
      case ActivationKind::Sine: out = (activation_.omega * pre_.array()).sin().matrix(); break;
    }
    require_finite(y, "DenseLayer::forward");
    cached_batch_ = x.cols();
  }

  Tensor forward(const Tensor& x) {
    Tensor y;
    forward(x, y);
    return y;
  }

  // Reads dL/dy from y.grad, accumulates dL/dW and dL/db, and (when
  // propagate is set) overwrites x.grad with dL/dx.
  void backward(Tensor& x, const Tensor& y, bool propagate = true) {
    detail::require(cached_batch_ > 0, "DenseLayer::backward called before forward");
    detail::require(x.cols() == cached_batch_ && y.cols() == cached_batch_ && x.rows() == in_width() &&
                        y.rows() == out_width(),
                    "DenseLayer::backward: tensors do not match the cached forward pass");
    RowMatrix delta;
    switch (activation_.kind) {
      case ActivationKind::Identity: delta = y.grad_matrix(); break;
      case ActivationKind::ReLU:
        delta = (pre_.array() > 0.0).select(y.grad_matrix(), 0.0);
        break;
      case ActivationKind::Sine:
        delta = (y.grad_matrix().array() * activation_.omega * (activation_.omega * pre_.array()).cos()).matrix();
        break;
    }
    weight_.grad_matrix().noalias() += delta * x.matrix().transpose();
    bias_.grad_matrix().col(0) += delta.rowwise().sum();
    require_finite_grad(weight_, "DenseLayer::backward");
    if (propagate) {
      x.grad_matrix().noalias() = weight_.matrix().transpose() * delta;
      require_finite_grad(x, "DenseLayer::backward");
    }
  }

 private:
  Tensor weight_;
  Tensor bias_;
  Activation activation_;
  RowMatrix pre_;
  std::size_t cached_batch_ = 0;
};

}  // namespace mhinr::nn
