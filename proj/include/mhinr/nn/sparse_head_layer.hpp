#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mhinr/nn/tensor.hpp"

namespace mhinr::nn {

// M single-neuron heads, each wired to `alpha` fixed columns of the body output:
//   out[m, b] = sum_j weight[m, j] * z[indices[m][j], b] + bias[m]
// with identity activation. The connection table is validated at construction
// and never changes afterwards.
class SparseHeadLayer {
 public:
  SparseHeadLayer() = default;
  SparseHeadLayer(std::size_t body_width, std::vector<std::uint32_t> indices, Tensor weight, Tensor bias)
      : body_width_(body_width), indices_(std::move(indices)), weight_(std::move(weight)), bias_(std::move(bias)) {
    const std::size_t heads = weight_.rows();
    const std::size_t alpha = weight_.cols();
    detail::require(heads > 0, "SparseHeadLayer: at least one head required");
    detail::require(alpha >= 1 && alpha <= body_width_,
                    "SparseHeadLayer: alpha " + std::to_string(alpha) + " outside [1, " +
                        std::to_string(body_width_) + "]");
    detail::require(indices_.size() == heads * alpha, "SparseHeadLayer: index table must be M x alpha");
    detail::require(bias_.rows() == heads && bias_.cols() == 1, "SparseHeadLayer: bias must be M x 1");
    std::vector<std::uint32_t> row(alpha);
    for (std::size_t m = 0; m < heads; ++m) {
      std::copy_n(indices_.begin() + static_cast<std::ptrdiff_t>(m * alpha), alpha, row.begin());
      for (auto idx : row) {
        detail::require(idx < body_width_, "SparseHeadLayer: head " + std::to_string(m) + " index " +
                                               std::to_string(idx) + " out of range");
      }
      std::sort(row.begin(), row.end());
      detail::require(std::adjacent_find(row.begin(), row.end()) == row.end(),
                      "SparseHeadLayer: head " + std::to_string(m) + " has duplicate indices");
    }
  }

  std::size_t head_count() const { return weight_.rows(); }
  std::size_t alpha() const { return weight_.cols(); }
  std::size_t body_width() const { return body_width_; }

  std::uint32_t index(std::size_t head, std::size_t j) const { return indices_[head * alpha() + j]; }
  const std::vector<std::uint32_t>& indices() const { return indices_; }

  Tensor& weight() { return weight_; }
  const Tensor& weight() const { return weight_; }
  Tensor& bias() { return bias_; }
  const Tensor& bias() const { return bias_; }

  std::size_t parameter_count() const { return weight_.size() + bias_.size(); }

  void forward(const Tensor& z, Tensor& out) {
    detail::require(z.rows() == body_width_, "SparseHeadLayer::forward: input has " + std::to_string(z.rows()) +
                                                 " rows, layer expects " + std::to_string(body_width_));
    const std::size_t batch = z.cols();
    const std::size_t a = alpha();
    out.resize(head_count(), batch);
    for (std::size_t m = 0; m < head_count(); ++m) {
      double* dst = out.row_data(m);
      std::fill(dst, dst + batch, bias_(m, 0));
      for (std::size_t j = 0; j < a; ++j) {
        const double w = weight_(m, j);
        const double* src = z.row_data(index(m, j));
        for (std::size_t b = 0; b < batch; ++b) dst[b] += w * src[b];
      }
    }
    require_finite(out, "SparseHeadLayer::forward");
    cached_batch_ = batch;
  }

  Tensor forward(const Tensor& z) {
    Tensor out;
    forward(z, out);
    return out;
  }

  // Reads dL/dout from out.grad; only the stored (m, j) slots receive weight
  // gradient. When propagate is set, z.grad is overwritten with dL/dz.
  void backward(Tensor& z, const Tensor& out, bool propagate = true) {
    detail::require(cached_batch_ > 0, "SparseHeadLayer::backward called before forward");
    detail::require(z.cols() == cached_batch_ && out.cols() == cached_batch_ && z.rows() == body_width_ &&
                        out.rows() == head_count(),
                    "SparseHeadLayer::backward: tensors do not match the cached forward pass");
    const std::size_t batch = z.cols();
    const std::size_t a = alpha();
    if (propagate) z.zero_grad();
    for (std::size_t m = 0; m < head_count(); ++m) {
      const double* g = out.grad_row(m);
      double gb = 0.0;
      for (std::size_t b = 0; b < batch; ++b) gb += g[b];
      bias_.grad_at(m, 0) += gb;
      for (std::size_t j = 0; j < a; ++j) {
        const std::uint32_t row = index(m, j);
        const double* src = z.row_data(row);
        double gw = 0.0;
        for (std::size_t b = 0; b < batch; ++b) gw += g[b] * src[b];
        weight_.grad_at(m, j) += gw;
        if (propagate) {
          const double w = weight_(m, j);
          double* dz = z.grad_row(row);
          for (std::size_t b = 0; b < batch; ++b) dz[b] += w * g[b];
        }
      }
    }
    require_finite_grad(weight_, "SparseHeadLayer::backward");
    if (propagate) require_finite_grad(z, "SparseHeadLayer::backward");
  }

 private:
  std::size_t body_width_ = 0;
  std::vector<std::uint32_t> indices_;
  Tensor weight_;
  Tensor bias_;
  std::size_t cached_batch_ = 0;
};

}  // namespace mhinr::nn
