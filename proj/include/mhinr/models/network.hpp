#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "mhinr/models/model_spec.hpp"
#include "mhinr/nn/dense_layer.hpp"
#include "mhinr/nn/init.hpp"
#include "mhinr/nn/sparse_head_layer.hpp"

namespace mhinr::models {

// Coordinate network for all three architectures:
//   MultiHead:      coords -> ReLU body -> sparse heads (M outputs)
//   Siren:          coords -> sine body -> dense linear output
//   FourierFeature: coords -> fixed [cos, sin](2 pi B x) -> ReLU body -> dense linear output
// Inputs are 2 x B column batches; outputs are M x B (M = 1 for baselines).
class InrNetwork {
 public:
  InrNetwork() = default;

  InrNetwork(ModelSpec spec, std::vector<nn::DenseLayer> body, std::optional<nn::SparseHeadLayer> heads,
             std::optional<nn::DenseLayer> output, std::optional<nn::Tensor> encoding)
      : spec_(std::move(spec)),
        body_(std::move(body)),
        heads_(std::move(heads)),
        output_(std::move(output)),
        encoding_(std::move(encoding)) {
    spec_.validate();
    detail::require(body_.size() == spec_.body_widths.size(), "InrNetwork: body depth does not match spec");
    detail::require(heads_.has_value() == (spec_.kind == ModelKind::MultiHead),
                    "InrNetwork: sparse heads exist exactly for multi-head models");
    detail::require(output_.has_value() != heads_.has_value(), "InrNetwork: need exactly one output stage");
    detail::require(encoding_.has_value() == (spec_.kind == ModelKind::FourierFeature),
                    "InrNetwork: Fourier encoding exists exactly for Fourier-feature models");
    std::size_t width = spec_.input_width();
    for (std::size_t i = 0; i < body_.size(); ++i) {
      detail::require(body_[i].in_width() == width && body_[i].out_width() == spec_.body_widths[i],
                      "InrNetwork: body layer " + std::to_string(i) + " has wrong shape");
      width = body_[i].out_width();
    }
    if (heads_) {
      detail::require(heads_->body_width() == width && heads_->head_count() == spec_.head_count() &&
                          heads_->alpha() == spec_.alpha,
                      "InrNetwork: head layer does not match spec");
    } else {
      detail::require(output_->in_width() == width && output_->out_width() == 1 && output_->activation().is_identity(),
                      "InrNetwork: output layer must be width -> 1 linear");
    }
    if (encoding_) {
      detail::require(encoding_->rows() == spec_.ff_features && encoding_->cols() == 2,
                      "InrNetwork: Fourier matrix must be ff_features x 2");
    }
    activations_.resize(body_.size() + 2);
  }

  const ModelSpec& spec() const { return spec_; }
  std::size_t output_count() const { return spec_.head_count(); }

  std::vector<nn::DenseLayer>& body() { return body_; }
  const std::vector<nn::DenseLayer>& body() const { return body_; }
  nn::SparseHeadLayer& heads() { return heads_.value(); }
  const nn::SparseHeadLayer& heads() const { return heads_.value(); }
  bool has_heads() const { return heads_.has_value(); }
  nn::DenseLayer& output_layer() { return output_.value(); }
  const nn::DenseLayer& output_layer() const { return output_.value(); }
  const std::optional<nn::Tensor>& encoding() const { return encoding_; }

  /// Trainable tensors in a fixed order: body (weight, bias)..., then heads/output (weight, bias).
  std::vector<nn::Tensor*> parameters() {
    std::vector<nn::Tensor*> ps;
    for (auto& layer : body_) {
      ps.push_back(&layer.weight());
      ps.push_back(&layer.bias());
    }
    if (heads_) {
      ps.push_back(&heads_->weight());
      ps.push_back(&heads_->bias());
    } else {
      ps.push_back(&output_->weight());
      ps.push_back(&output_->bias());
    }
    return ps;
  }

  std::vector<const nn::Tensor*> parameters() const {
    std::vector<const nn::Tensor*> ps;
    for (auto* p : const_cast<InrNetwork*>(this)->parameters()) ps.push_back(p);
    return ps;
  }

  /// Sum of allocated trainable tensor sizes (the Fourier matrix is fixed and excluded).
  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto* p : parameters()) n += p->size();
    return n;
  }

  void zero_grad() {
    for (auto* p : parameters()) p->zero_grad();
  }

  // Runs the network on a 2 x B coordinate batch. The returned tensor stays
  // valid until the next forward; seed its grad and call backward() to
  // accumulate parameter gradients.
  nn::Tensor& forward(const nn::Tensor& coords) {
    detail::require(coords.rows() == 2, "InrNetwork::forward: coordinates must be 2 x B");
    nn::Tensor& input = activations_[0];
    if (encoding_) {
      encode(coords, input);
    } else {
      input = coords;
    }
    for (std::size_t i = 0; i < body_.size(); ++i) body_[i].forward(activations_[i], activations_[i + 1]);
    nn::Tensor& out = activations_.back();
    if (heads_) {
      heads_->forward(activations_[body_.size()], out);
    } else {
      output_->forward(activations_[body_.size()], out);
    }
    has_forward_ = true;
    return out;
  }

  void backward() {
    detail::require(has_forward_, "InrNetwork::backward called before forward");
    nn::Tensor& features = activations_[body_.size()];
    if (heads_) {
      heads_->backward(features, activations_.back());
    } else {
      output_->backward(features, activations_.back());
    }
    for (std::size_t i = body_.size(); i-- > 0;) body_[i].backward(activations_[i], activations_[i + 1], i > 0);
  }

  /// Body feature vector of the last forward pass (width x B).
  const nn::Tensor& features() const { return activations_[body_.size()]; }

 private:
  void encode(const nn::Tensor& coords, nn::Tensor& out) const {
    const std::size_t features = encoding_->rows();
    const std::size_t batch = coords.cols();
    out.resize(2 * features, batch);
    nn::RowMatrix proj = (2.0 * std::numbers::pi) * (encoding_->matrix() * coords.matrix());
    const auto f = static_cast<Eigen::Index>(features);
    auto m = out.matrix();
    m.topRows(f) = proj.array().cos().matrix();
    m.bottomRows(f) = proj.array().sin().matrix();
  }

  ModelSpec spec_;
  std::vector<nn::DenseLayer> body_;
  std::optional<nn::SparseHeadLayer> heads_;
  std::optional<nn::DenseLayer> output_;
  std::optional<nn::Tensor> encoding_;
  std::vector<nn::Tensor> activations_;
  bool has_forward_ = false;
};

namespace build_detail {

inline nn::DenseLayer fan_in_layer(std::size_t in, std::size_t out, nn::Activation act, nn::Rng& rng) {
  const double bound = nn::fan_in_bound(in);
  auto w = nn::init_uniform(out, in, -bound, bound, rng);
  auto b = nn::init_uniform(out, 1, -bound, bound, rng);
  return {std::move(w), std::move(b), act};
}

// SIREN recipe: first layer U(-1/in, 1/in); later layers U(-sqrt(6/in)/omega, ...).
// Biases use the fan-in bound.
inline nn::DenseLayer siren_layer(std::size_t in, std::size_t out, bool first, double omega, nn::Activation act,
                                  nn::Rng& rng) {
  const double fan_in = static_cast<double>(in);
  const double bound = first ? 1.0 / fan_in : std::sqrt(6.0 / fan_in) / omega;
  auto w = nn::init_uniform(out, in, -bound, bound, rng);
  const double bias_bound = nn::fan_in_bound(in);
  auto b = nn::init_uniform(out, 1, -bias_bound, bias_bound, rng);
  return {std::move(w), std::move(b), act};
}

}  // namespace build_detail

// Builds and initializes a network; every random draw comes from spec.seed in
// this order: Fourier matrix (row-major), then per body layer weight then
// bias, then head index table (head by head), head weights, head biases (or
// output weight, output bias).
inline InrNetwork build(const ModelSpec& spec) {
  spec.validate();
  nn::Rng rng(spec.seed);
  std::optional<nn::Tensor> encoding;
  if (spec.kind == ModelKind::FourierFeature) encoding = nn::init_normal(spec.ff_features, 2, spec.ff_sigma, rng);

  std::vector<nn::DenseLayer> body;
  std::size_t in = spec.input_width();
  for (std::size_t i = 0; i < spec.body_widths.size(); ++i) {
    const std::size_t out = spec.body_widths[i];
    if (spec.kind == ModelKind::Siren) {
      body.push_back(build_detail::siren_layer(in, out, i == 0, spec.omega0, nn::Activation::sine(spec.omega0), rng));
    } else {
      body.push_back(build_detail::fan_in_layer(in, out, nn::Activation::relu(), rng));
    }
    in = out;
  }

  if (spec.kind == ModelKind::MultiHead) {
    const std::size_t heads = spec.head_count();
    std::vector<std::uint32_t> indices;
    indices.reserve(heads * spec.alpha);
    for (std::size_t m = 0; m < heads; ++m) {
      auto row = rng.sample_without_replacement(static_cast<std::uint32_t>(in), static_cast<std::uint32_t>(spec.alpha));
      std::sort(row.begin(), row.end());
      indices.insert(indices.end(), row.begin(), row.end());
    }
    const double bound = nn::fan_in_bound(spec.alpha);
    auto w = nn::init_uniform(heads, spec.alpha, -bound, bound, rng);
    auto b = nn::init_uniform(heads, 1, -bound, bound, rng);
    return {spec, std::move(body), nn::SparseHeadLayer(in, std::move(indices), std::move(w), std::move(b)),
            std::nullopt, std::nullopt};
  }

  nn::DenseLayer output = spec.kind == ModelKind::Siren
                              ? build_detail::siren_layer(in, 1, false, spec.omega0, nn::Activation::identity(), rng)
                              : build_detail::fan_in_layer(in, 1, nn::Activation::identity(), rng);
  return {spec, std::move(body), std::nullopt, std::move(output), std::move(encoding)};
}

}  // namespace mhinr::models
