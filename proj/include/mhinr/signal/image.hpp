#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mhinr/error.hpp"

namespace mhinr::signal {

// Dense grayscale raster, row-major, every pixel in [0, 1].
// rows() is N_x (height) and cols() is N_y (width).
class Image {
 public:
  Image() = default;
  Image(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), pixels_(rows * cols, fill) {
    check_range();
  }
  Image(std::size_t rows, std::size_t cols, std::vector<double> pixels)
      : rows_(rows), cols_(cols), pixels_(std::move(pixels)) {
    detail::require(pixels_.size() == rows_ * cols_, "Image: pixel count does not match " + std::to_string(rows_) +
                                                         "x" + std::to_string(cols_));
    check_range();
  }

  /// Clamps every value into [0, 1] first.
  static Image clamped(std::size_t rows, std::size_t cols, std::vector<double> values) {
    for (double& v : values) v = std::clamp(v, 0.0, 1.0);
    return Image(rows, cols, std::move(values));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  /// Zero-based access.
  double at(std::size_t r, std::size_t c) const { return pixels_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, double v) {
    detail::require(v >= 0.0 && v <= 1.0, "Image::set: value outside [0,1]");
    pixels_[r * cols_ + c] = v;
  }

  const std::vector<double>& pixels() const { return pixels_; }

  double mean() const {
    double s = 0.0;
    for (double v : pixels_) s += v;
    return pixels_.empty() ? 0.0 : s / static_cast<double>(pixels_.size());
  }
  double min() const { return pixels_.empty() ? 0.0 : *std::min_element(pixels_.begin(), pixels_.end()); }
  double max() const { return pixels_.empty() ? 0.0 : *std::max_element(pixels_.begin(), pixels_.end()); }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  void check_range() const {
    for (double v : pixels_) {
      // NaN fails both comparisons.
      if (!(v >= 0.0 && v <= 1.0)) throw ContractError("Image: pixel value outside [0,1]");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> pixels_;
};

}  // namespace mhinr::signal
