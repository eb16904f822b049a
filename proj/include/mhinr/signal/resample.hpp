#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "mhinr/signal/image.hpp"

namespace mhinr::signal {

/// Mean of each factor x factor block.
inline Image box_downsample(const Image& img, std::size_t factor) {
  detail::require(factor >= 1, "box_downsample: factor must be >= 1");
  detail::require(img.rows() % factor == 0 && img.cols() % factor == 0,
                  "box_downsample: image dimensions not divisible by factor");
  const std::size_t rows = img.rows() / factor;
  const std::size_t cols = img.cols() / factor;
  const double inv = 1.0 / static_cast<double>(factor * factor);
  std::vector<double> px(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double sum = 0.0;
      for (std::size_t dr = 0; dr < factor; ++dr) {
        for (std::size_t dc = 0; dc < factor; ++dc) sum += img.at(r * factor + dr, c * factor + dc);
      }
      px[r * cols + c] = std::min(1.0, sum * inv);
    }
  }
  return Image(rows, cols, std::move(px));
}

/// Nearest-neighbour (pixel replication) upsampling.
inline Image constant_upsample(const Image& img, std::size_t factor) {
  detail::require(factor >= 1, "constant_upsample: factor must be >= 1");
  const std::size_t rows = img.rows() * factor;
  const std::size_t cols = img.cols() * factor;
  std::vector<double> px(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) px[r * cols + c] = img.at(r / factor, c / factor);
  }
  return Image(rows, cols, std::move(px));
}

}  // namespace mhinr::signal
