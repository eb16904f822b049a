#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mhinr/error.hpp"
#include "mhinr/signal/image.hpp"

namespace mhinr::signal {

// Partition of an N_x x N_y image into H_x x H_y equal cells. Cell (l, k)
// (1-based) is owned by head m = (l - 1) H_y + (k - 1) (0-based).
class CellGrid {
 public:
  CellGrid(std::size_t image_rows, std::size_t image_cols, std::size_t heads_x, std::size_t heads_y)
      : image_rows_(image_rows), image_cols_(image_cols), heads_x_(heads_x), heads_y_(heads_y) {
    detail::require(heads_x >= 1 && heads_y >= 1, "CellGrid: head grid must be at least 1x1");
    detail::require(image_rows >= 1 && image_cols >= 1, "CellGrid: empty image");
    detail::require(image_rows % heads_x == 0 && image_cols % heads_y == 0,
                    "CellGrid: image " + std::to_string(image_rows) + "x" + std::to_string(image_cols) +
                        " is not divisible by head grid " + std::to_string(heads_x) + "x" + std::to_string(heads_y));
  }

  std::size_t image_rows() const { return image_rows_; }
  std::size_t image_cols() const { return image_cols_; }
  std::size_t heads_x() const { return heads_x_; }
  std::size_t heads_y() const { return heads_y_; }
  std::size_t head_count() const { return heads_x_ * heads_y_; }
  std::size_t cell_rows() const { return image_rows_ / heads_x_; }
  std::size_t cell_cols() const { return image_cols_ / heads_y_; }
  std::size_t pixels_per_cell() const { return cell_rows() * cell_cols(); }

  /// Same head layout at another resolution.
  CellGrid rescaled(std::size_t image_rows, std::size_t image_cols) const {
    return CellGrid(image_rows, image_cols, heads_x_, heads_y_);
  }

  std::size_t head_index(std::size_t l, std::size_t k) const {
    detail::require(l >= 1 && l <= heads_x_ && k >= 1 && k <= heads_y_, "CellGrid::head_index: cell out of range");
    return (l - 1) * heads_y_ + (k - 1);
  }

  struct Pixel {
    std::size_t row;  // 1-based
    std::size_t col;  // 1-based
  };

  /// Global 1-based pixel for cell (l, k), local pixel (r, c), all 1-based.
  Pixel global_pixel(std::size_t l, std::size_t k, std::size_t r, std::size_t c) const {
    detail::require(l >= 1 && l <= heads_x_ && k >= 1 && k <= heads_y_, "CellGrid: cell out of range");
    detail::require(r >= 1 && r <= cell_rows() && c >= 1 && c <= cell_cols(), "CellGrid: local pixel out of range");
    return {cell_rows() * (l - 1) + r, cell_cols() * (k - 1) + c};
  }

  friend bool operator==(const CellGrid&, const CellGrid&) = default;

 private:
  std::size_t image_rows_;
  std::size_t image_cols_;
  std::size_t heads_x_;
  std::size_t heads_y_;
};

/// I_{l,k}[r, c] with all indices 1-based.
inline double cell_pixel(const Image& img, const CellGrid& grid, std::size_t l, std::size_t k, std::size_t r,
                         std::size_t c) {
  detail::require(img.rows() == grid.image_rows() && img.cols() == grid.image_cols(),
                  "cell_pixel: image does not match grid");
  const auto p = grid.global_pixel(l, k, r, c);
  return img.at(p.row - 1, p.col - 1);
}

/// Every cell as its own image, ordered by head index.
inline std::vector<Image> partition(const Image& img, const CellGrid& grid) {
  detail::require(img.rows() == grid.image_rows() && img.cols() == grid.image_cols(),
                  "partition: image does not match grid");
  std::vector<Image> cells;
  cells.reserve(grid.head_count());
  for (std::size_t l = 1; l <= grid.heads_x(); ++l) {
    for (std::size_t k = 1; k <= grid.heads_y(); ++k) {
      std::vector<double> px;
      px.reserve(grid.pixels_per_cell());
      for (std::size_t r = 1; r <= grid.cell_rows(); ++r) {
        for (std::size_t c = 1; c <= grid.cell_cols(); ++c) px.push_back(cell_pixel(img, grid, l, k, r, c));
      }
      cells.emplace_back(grid.cell_rows(), grid.cell_cols(), std::move(px));
    }
  }
  return cells;
}

inline Image assemble(const std::vector<Image>& cells, const CellGrid& grid) {
  detail::require(cells.size() == grid.head_count(), "assemble: expected " + std::to_string(grid.head_count()) +
                                                         " cells, got " + std::to_string(cells.size()));
  std::vector<double> px(grid.image_rows() * grid.image_cols(), 0.0);
  for (std::size_t l = 1; l <= grid.heads_x(); ++l) {
    for (std::size_t k = 1; k <= grid.heads_y(); ++k) {
      const Image& cell = cells[grid.head_index(l, k)];
      detail::require(cell.rows() == grid.cell_rows() && cell.cols() == grid.cell_cols(),
                      "assemble: cell shape mismatch");
      for (std::size_t r = 1; r <= grid.cell_rows(); ++r) {
        for (std::size_t c = 1; c <= grid.cell_cols(); ++c) {
          const auto p = grid.global_pixel(l, k, r, c);
          px[(p.row - 1) * grid.image_cols() + (p.col - 1)] = cell.at(r - 1, c - 1);
        }
      }
    }
  }
  return Image(grid.image_rows(), grid.image_cols(), std::move(px));
}

}  // namespace mhinr::signal
