#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mhinr/error.hpp"

namespace mhinr::nn {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;

// Row-major 2-D float64 array with a gradient buffer of the same shape.
// Parameters accumulate dL/dparam in grad; activations receive dL/dactivation
// there during the backward pass.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill), grad_(rows * cols, 0.0) {}

  static Tensor from_values(std::size_t rows, std::size_t cols, std::vector<double> values) {
    detail::require(values.size() == rows * cols, "Tensor::from_values: size does not match shape");
    Tensor t;
    t.rows_ = rows;
    t.cols_ = cols;
    t.values_ = std::move(values);
    t.grad_.assign(rows * cols, 0.0);
    return t;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  double& grad_at(std::size_t r, std::size_t c) { return grad_[r * cols_ + c]; }
  double grad_at(std::size_t r, std::size_t c) const { return grad_[r * cols_ + c]; }

  double* row_data(std::size_t r) { return values_.data() + r * cols_; }
  const double* row_data(std::size_t r) const { return values_.data() + r * cols_; }
  double* grad_row(std::size_t r) { return grad_.data() + r * cols_; }
  const double* grad_row(std::size_t r) const { return grad_.data() + r * cols_; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<double> grad() { return grad_; }
  std::span<const double> grad() const { return grad_; }

  MatrixMap matrix() { return {values_.data(), as_index(rows_), as_index(cols_)}; }
  ConstMatrixMap matrix() const { return {values_.data(), as_index(rows_), as_index(cols_)}; }
  MatrixMap grad_matrix() { return {grad_.data(), as_index(rows_), as_index(cols_)}; }
  ConstMatrixMap grad_matrix() const { return {grad_.data(), as_index(rows_), as_index(cols_)}; }

  // Reallocates only when the shape changes; contents are unspecified afterwards.
  void resize(std::size_t rows, std::size_t cols) {
    if (rows == rows_ && cols == cols_) return;
    rows_ = rows;
    cols_ = cols;
    values_.assign(rows * cols, 0.0);
    grad_.assign(rows * cols, 0.0);
  }

  void zero_grad() { std::fill(grad_.begin(), grad_.end(), 0.0); }

  bool values_finite() const { return all_finite(values_); }
  bool grad_finite() const { return all_finite(grad_); }

  bool same_shape(const Tensor& other) const { return rows_ == other.rows_ && cols_ == other.cols_; }

  std::string shape_string() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.values_ == b.values_;
  }

 private:
  static Eigen::Index as_index(std::size_t n) { return static_cast<Eigen::Index>(n); }
  static bool all_finite(std::span<const double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double v) { return std::isfinite(v); });
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<double> grad_;
};

inline void require_finite(const Tensor& t, const char* where) {
  if (!t.values_finite()) throw NumericError(std::string(where) + ": non-finite value");
}

inline void require_finite_grad(const Tensor& t, const char* where) {
  if (!t.grad_finite()) throw NumericError(std::string(where) + ": non-finite gradient");
}

}  // namespace mhinr::nn
