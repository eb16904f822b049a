#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "mhinr/models/network.hpp"

// Checkpoint layout, all integers and floats little-endian:
//   bytes 0..7   magic "MHINRCKP"
//   u32          format version (kCheckpointVersion)
//   u64 n, n bytes   model spec as UTF-8 JSON
//   u32 count        number of tensors, in InrNetwork::parameters() order,
//                    followed by the Fourier matrix for Fourier-feature models
//   per tensor:  u64 rows, u64 cols, rows*cols f64 values
//   u64 count, count u32   sparse head index table (0 for baselines)
namespace mhinr::models {

inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr char kCheckpointMagic[8] = {'M', 'H', 'I', 'N', 'R', 'C', 'K', 'P'};

namespace ckpt_detail {

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::uint8_t bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(std::begin(bytes), std::end(bytes));
  out.insert(out.end(), std::begin(bytes), std::end(bytes));
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    std::uint8_t bytes[sizeof(T)];
    std::memcpy(bytes, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(std::begin(bytes), std::end(bytes));
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
  }

  std::string get_string(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw IoError("checkpoint: truncated file");
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

inline void put_tensor(std::vector<std::uint8_t>& out, const nn::Tensor& t) {
  put<std::uint64_t>(out, t.rows());
  put<std::uint64_t>(out, t.cols());
  for (double v : t.values()) put<double>(out, v);
}

inline nn::Tensor get_tensor(Reader& in, std::size_t rows, std::size_t cols) {
  const auto r = in.get<std::uint64_t>();
  const auto c = in.get<std::uint64_t>();
  if (r != rows || c != cols) throw IoError("checkpoint: tensor shape does not match the stored spec");
  std::vector<double> values(rows * cols);
  for (double& v : values) v = in.get<double>();
  return nn::Tensor::from_values(rows, cols, std::move(values));
}

}  // namespace ckpt_detail

inline std::vector<std::uint8_t> encode_checkpoint(const InrNetwork& net) {
  std::vector<std::uint8_t> out(std::begin(kCheckpointMagic), std::end(kCheckpointMagic));
  ckpt_detail::put<std::uint32_t>(out, kCheckpointVersion);
  const std::string spec = to_json(net.spec()).dump();
  ckpt_detail::put<std::uint64_t>(out, spec.size());
  out.insert(out.end(), spec.begin(), spec.end());
  const auto params = net.parameters();
  const bool has_encoding = net.encoding().has_value();
  ckpt_detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(params.size() + (has_encoding ? 1 : 0)));
  for (const auto* p : params) ckpt_detail::put_tensor(out, *p);
  if (has_encoding) ckpt_detail::put_tensor(out, *net.encoding());
  if (net.has_heads()) {
    const auto& idx = net.heads().indices();
    ckpt_detail::put<std::uint64_t>(out, idx.size());
    for (auto i : idx) ckpt_detail::put<std::uint32_t>(out, i);
  } else {
    ckpt_detail::put<std::uint64_t>(out, 0);
  }
  return out;
}

inline InrNetwork decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < sizeof(kCheckpointMagic) ||
      std::memcmp(bytes.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) != 0) {
    throw IoError("checkpoint: bad magic");
  }
  std::vector<std::uint8_t> rest(bytes.begin() + sizeof(kCheckpointMagic), bytes.end());
  ckpt_detail::Reader in(rest);
  const auto version = in.get<std::uint32_t>();
  if (version != kCheckpointVersion) throw IoError("checkpoint: unsupported version " + std::to_string(version));
  const auto spec_len = in.get<std::uint64_t>();
  ModelSpec spec;
  try {
    spec = spec_from_json(nlohmann::json::parse(in.get_string(spec_len)));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("checkpoint: bad spec: ") + e.what());
  }
  const auto count = in.get<std::uint32_t>();
  const std::size_t expected = 2 * spec.body_widths.size() + 2 + (spec.kind == ModelKind::FourierFeature ? 1 : 0);
  if (count != expected) throw IoError("checkpoint: unexpected tensor count");

  std::vector<nn::DenseLayer> body;
  std::size_t in_width = spec.input_width();
  for (std::size_t i = 0; i < spec.body_widths.size(); ++i) {
    const std::size_t out_width = spec.body_widths[i];
    auto w = ckpt_detail::get_tensor(in, out_width, in_width);
    auto b = ckpt_detail::get_tensor(in, out_width, 1);
    const auto act = spec.kind == ModelKind::Siren ? nn::Activation::sine(spec.omega0) : nn::Activation::relu();
    body.emplace_back(std::move(w), std::move(b), act);
    in_width = out_width;
  }
  const std::size_t out_rows = spec.head_count();
  const std::size_t out_cols = spec.kind == ModelKind::MultiHead ? spec.alpha : in_width;
  auto w = ckpt_detail::get_tensor(in, out_rows, out_cols);
  auto b = ckpt_detail::get_tensor(in, out_rows, 1);
  std::optional<nn::Tensor> encoding;
  if (spec.kind == ModelKind::FourierFeature) encoding = ckpt_detail::get_tensor(in, spec.ff_features, 2);
  const auto index_count = in.get<std::uint64_t>();
  std::vector<std::uint32_t> indices(index_count);
  for (auto& i : indices) i = in.get<std::uint32_t>();
  if (!in.at_end()) throw IoError("checkpoint: trailing bytes");

  try {
    if (spec.kind == ModelKind::MultiHead) {
      return {spec, std::move(body), nn::SparseHeadLayer(in_width, std::move(indices), std::move(w), std::move(b)),
              std::nullopt, std::nullopt};
    }
    if (index_count != 0) throw IoError("checkpoint: baseline model with head indices");
    return {spec, std::move(body), std::nullopt, nn::DenseLayer(std::move(w), std::move(b), nn::Activation::identity()),
            std::move(encoding)};
  } catch (const ContractError& e) {
    throw IoError(std::string("checkpoint: inconsistent model: ") + e.what());
  }
}

inline void save_checkpoint(const InrNetwork& net, const std::filesystem::path& path) {
  const auto bytes = encode_checkpoint(net);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

inline InrNetwork load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace mhinr::models
