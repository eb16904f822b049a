#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "mhinr/metrics/psnr.hpp"
#include "mhinr/models/network.hpp"
#include "mhinr/nn/adam.hpp"
#include "mhinr/nn/loss.hpp"
#include "mhinr/signal/cell_grid.hpp"
#include "mhinr/signal/coordinates.hpp"
#include "mhinr/signal/image.hpp"

namespace mhinr::models {

/// Head layout a model imposes on an image; baselines see the image as one cell.
inline signal::CellGrid model_grid(const ModelSpec& spec, std::size_t rows, std::size_t cols) {
  if (spec.kind == ModelKind::MultiHead) return signal::CellGrid(rows, cols, spec.heads_x, spec.heads_y);
  return signal::CellGrid(rows, cols, 1, 1);
}

// Cell-local coordinates as a 2 x B batch, b = (r - 1) * cell_cols + (c - 1).
// Row 0 carries the row coordinate x(r), row 1 the column coordinate y(c).
inline nn::Tensor grid_coordinates(const signal::CellGrid& grid) {
  const auto xs = signal::local_axis(grid.cell_rows());
  const auto ys = signal::local_axis(grid.cell_cols());
  nn::Tensor coords(2, grid.pixels_per_cell());
  for (std::size_t r = 0; r < xs.size(); ++r) {
    for (std::size_t c = 0; c < ys.size(); ++c) {
      coords(0, r * ys.size() + c) = xs[r];
      coords(1, r * ys.size() + c) = ys[c];
    }
  }
  return coords;
}

/// M x B targets: entry (m, b) is the pixel of head m's cell at batch position b.
inline nn::Tensor cell_targets(const signal::Image& img, const signal::CellGrid& grid) {
  detail::require(img.rows() == grid.image_rows() && img.cols() == grid.image_cols(),
                  "cell_targets: image does not match grid");
  nn::Tensor targets(grid.head_count(), grid.pixels_per_cell());
  for (std::size_t l = 1; l <= grid.heads_x(); ++l) {
    for (std::size_t k = 1; k <= grid.heads_y(); ++k) {
      const std::size_t m = grid.head_index(l, k);
      for (std::size_t r = 1; r <= grid.cell_rows(); ++r) {
        for (std::size_t c = 1; c <= grid.cell_cols(); ++c) {
          targets(m, (r - 1) * grid.cell_cols() + (c - 1)) = signal::cell_pixel(img, grid, l, k, r, c);
        }
      }
    }
  }
  return targets;
}

/// Inverse of cell_targets; values are clamped to [0, 1].
inline signal::Image render_cells(const nn::Tensor& outputs, const signal::CellGrid& grid) {
  detail::require(outputs.rows() == grid.head_count() && outputs.cols() == grid.pixels_per_cell(),
                  "render_cells: output shape does not match grid");
  std::vector<double> px(grid.image_rows() * grid.image_cols());
  for (std::size_t l = 1; l <= grid.heads_x(); ++l) {
    for (std::size_t k = 1; k <= grid.heads_y(); ++k) {
      const std::size_t m = grid.head_index(l, k);
      for (std::size_t r = 1; r <= grid.cell_rows(); ++r) {
        for (std::size_t c = 1; c <= grid.cell_cols(); ++c) {
          const auto p = grid.global_pixel(l, k, r, c);
          px[(p.row - 1) * grid.image_cols() + (p.col - 1)] = outputs(m, (r - 1) * grid.cell_cols() + (c - 1));
        }
      }
    }
  }
  return signal::Image::clamped(grid.image_rows(), grid.image_cols(), std::move(px));
}

/// One body pass at cell-local (x, y); returns the M head outputs (unclamped).
inline std::vector<double> forward_cellwise(InrNetwork& net, double x, double y) {
  nn::Tensor coords(2, 1);
  coords(0, 0) = x;
  coords(1, 0) = y;
  const auto& out = net.forward(coords);
  return {out.values().begin(), out.values().end()};
}

/// Largest coordinate batch pushed through the network at once during evaluation.
inline constexpr std::size_t kEvalChunk = 16384;

/// Raw M x B outputs for every cell-local coordinate of grid, evaluated in chunks.
inline nn::Tensor predict(InrNetwork& net, const signal::CellGrid& grid) {
  const nn::Tensor coords = grid_coordinates(grid);
  const std::size_t total = coords.cols();
  nn::Tensor result(net.output_count(), total);
  for (std::size_t start = 0; start < total; start += kEvalChunk) {
    const std::size_t n = std::min(kEvalChunk, total - start);
    nn::Tensor chunk(2, n);
    chunk.matrix() = coords.matrix().middleCols(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(n));
    const auto& out = net.forward(chunk);
    result.matrix().middleCols(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(n)) = out.matrix();
  }
  return result;
}

// Renders an out_rows x out_cols image: the head grid stays fixed and each
// cell is sampled at the finer cell-local resolution. Output is clamped to [0, 1].
inline signal::Image evaluate(InrNetwork& net, std::size_t out_rows, std::size_t out_cols) {
  const auto grid = model_grid(net.spec(), out_rows, out_cols);
  return render_cells(predict(net, grid), grid);
}

struct TrainOptions {
  std::size_t epochs = 2000;
  nn::AdamConfig adam{};
  std::function<void(std::size_t epoch, double loss)> on_epoch;
};

struct TrainResult {
  std::vector<double> losses;  // loss before each epoch's update
  metrics::PsnrResult train;   // clamped reconstruction after the last update
  signal::Image reconstruction;
};

// Full-batch Adam on the mean squared error over every (head, coordinate) pair.
inline TrainResult train(InrNetwork& net, const signal::Image& img, const signal::CellGrid& grid,
                         const TrainOptions& options) {
  detail::require(grid == model_grid(net.spec(), img.rows(), img.cols()),
                  "train: grid does not match the model's head layout and the image");
  const nn::Tensor coords = grid_coordinates(grid);
  const nn::Tensor targets = cell_targets(img, grid);
  auto params = net.parameters();
  nn::AdamState adam(params, options.adam);
  TrainResult result;
  result.losses.reserve(options.epochs);
  for (std::size_t epoch = 1; epoch <= options.epochs; ++epoch) {
    try {
      net.zero_grad();
      nn::Tensor& out = net.forward(coords);
      const double loss = nn::mse_loss(out, targets);
      net.backward();
      nn::adam_step(params, adam);
      result.losses.push_back(loss);
      if (options.on_epoch) options.on_epoch(epoch, loss);
    } catch (const NumericError& e) {
      throw NumericError("training diverged at epoch " + std::to_string(epoch) + ": " + e.what());
    }
  }
  result.reconstruction = render_cells(predict(net, grid), grid);
  result.train = metrics::psnr(result.reconstruction, img);
  return result;
}

inline TrainResult train(InrNetwork& net, const signal::Image& img, const TrainOptions& options) {
  return train(net, img, model_grid(net.spec(), img.rows(), img.cols()), options);
}

}  // namespace mhinr::models
