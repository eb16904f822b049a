#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>

#include "mhinr/models/model_spec.hpp"

namespace mhinr::models {

/// Trainable parameters (weights and biases). The fixed Fourier matrix is not counted.
inline std::size_t count_params(const ModelSpec& spec) {
  spec.validate();
  std::size_t total = 0;
  std::size_t in = spec.input_width();
  for (auto out : spec.body_widths) {
    total += in * out + out;
    in = out;
  }
  if (spec.kind == ModelKind::MultiHead) return total + spec.head_count() * (spec.alpha + 1);
  return total + in + 1;
}

inline constexpr const char* kFlopsConvention =
    "multiply-accumulate = 2 FLOPs; bias add = 1 FLOP; non-identity activation (relu, sine, cos) = 1 FLOP per "
    "element; Fourier encoding = 2*2*features MACs plus 2*features trig; evaluation phase only";

struct FlopsReport {
  std::uint64_t flops_per_forward = 0;
  std::uint64_t forwards_per_image = 0;
  std::uint64_t flops_per_image = 0;
  std::string convention = kFlopsConvention;
};

namespace flops_detail {

inline std::uint64_t dense(std::uint64_t in, std::uint64_t out, bool activation) {
  return 2 * in * out + out + (activation ? out : 0);
}

}  // namespace flops_detail

/// Evaluation cost of one forward pass (one coordinate).
inline std::uint64_t flops_per_forward(const ModelSpec& spec) {
  spec.validate();
  std::uint64_t flops = 0;
  if (spec.kind == ModelKind::FourierFeature) flops += 2 * (2 * 2 * spec.ff_features) + 2 * spec.ff_features;
  std::uint64_t in = spec.input_width();
  for (auto out : spec.body_widths) {
    flops += flops_detail::dense(in, out, true);
    in = out;
  }
  if (spec.kind == ModelKind::MultiHead) return flops + spec.head_count() * (2 * spec.alpha + 1);
  return flops + flops_detail::dense(in, 1, false);
}

// FLOPs to render an out_rows x out_cols image. A multi-head forward yields
// one pixel per head, so it needs only (out_rows/H_x)(out_cols/H_y) forwards.
inline FlopsReport count_flops(const ModelSpec& spec, std::size_t out_rows, std::size_t out_cols) {
  FlopsReport report;
  report.flops_per_forward = flops_per_forward(spec);
  if (spec.kind == ModelKind::MultiHead) {
    detail::require(out_rows % spec.heads_x == 0 && out_cols % spec.heads_y == 0,
                    "count_flops: output dimensions not divisible by head grid");
    report.forwards_per_image = (out_rows / spec.heads_x) * (out_cols / spec.heads_y);
  } else {
    report.forwards_per_image = out_rows * out_cols;
  }
  report.flops_per_image = report.flops_per_forward * report.forwards_per_image;
  return report;
}

/// Relative tolerance accepted by match_params.
inline constexpr double kParamMatchTolerance = 0.005;

// Baseline spec with as many hidden layers as `base` and the parameter count
// nearest `target`. Siren searches the shared hidden width; FourierFeature
// searches width and feature count (ties prefer more features, then narrower
// width). Non-architecture fields (seed, epochs, omega0, sigma) come from base.
inline ModelSpec match_params(ModelKind kind, std::size_t target, const ModelSpec& base = ModelSpec{}) {
  detail::require(kind != ModelKind::MultiHead, "match_params: target kind must be a baseline");
  detail::require(target > 0, "match_params: target must be positive");
  const std::size_t depth = base.body_widths.empty() ? 4 : base.body_widths.size();
  ModelSpec best = base;
  best.kind = kind;
  std::size_t best_diff = std::numeric_limits<std::size_t>::max();

  auto consider = [&](std::size_t width, std::size_t features) {
    ModelSpec s = base;
    s.kind = kind;
    s.body_widths.assign(depth, width);
    s.ff_features = features;
    const std::size_t n = count_params(s);
    const std::size_t diff = n > target ? n - target : target - n;
    if (diff < best_diff) {
      best_diff = diff;
      best = s;
    }
    return n;
  };

  const std::size_t max_width = 8192;
  if (kind == ModelKind::Siren) {
    for (std::size_t w = 1; w <= max_width; ++w) {
      if (consider(w, base.ff_features) > target) break;
    }
  } else {
    for (std::size_t f = 256; f >= 1; --f) {
      for (std::size_t w = 1; w <= max_width; ++w) {
        if (consider(w, f) > target) break;
      }
    }
  }
  const double rel = static_cast<double>(best_diff) / static_cast<double>(target);
  if (rel > kParamMatchTolerance) {
    throw ContractError("match_params: no " + to_string(kind) + " configuration within 0.5% of " +
                        std::to_string(target) + " parameters");
  }
  return best;
}

}  // namespace mhinr::models
