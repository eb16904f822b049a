#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mhinr/experiments/csv.hpp"
#include "mhinr/models/model_spec.hpp"
#include "mhinr/signal/perlin.hpp"

namespace mhinr::experiments {

enum class ExperimentKind { Fit, SweepOctaves, SweepHeads, Compare, Perlin };

inline std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Fit: return "fit";
    case ExperimentKind::SweepOctaves: return "sweep-octaves";
    case ExperimentKind::SweepHeads: return "sweep-heads";
    case ExperimentKind::Compare: return "compare";
    case ExperimentKind::Perlin: break;
  }
  return "perlin";
}

struct Dims {
  std::size_t rows = 0;
  std::size_t cols = 0;
  friend bool operator==(const Dims&, const Dims&) = default;
};

inline std::string to_string(const Dims& d) { return std::to_string(d.rows) + "x" + std::to_string(d.cols); }

/// "RxC", or a single "N" meaning N x N.
inline Dims parse_dims(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) {
    const auto n = parse_count(text);
    return {n, n};
  }
  return {parse_count(text.substr(0, x)), parse_count(text.substr(x + 1))};
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find(',', start);
    auto item = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (!item.empty()) items.push_back(item);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return items;
}

/// "a..b" (inclusive range) or a comma list.
inline std::vector<std::size_t> parse_count_list(const std::string& text) {
  std::vector<std::size_t> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const auto lo = parse_count(text.substr(0, dots));
    const auto hi = parse_count(text.substr(dots + 2));
    detail::require(lo <= hi, "empty range '" + text + "'");
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  for (const auto& item : split_list(text)) out.push_back(parse_count(item));
  return out;
}

// Everything one CLI invocation needs. Defaults are desk scale; see
// apply_paper_scale for the full-size settings.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Fit;
  models::ModelKind model = models::ModelKind::MultiHead;
  std::optional<std::filesystem::path> image;
  signal::PerlinSpec perlin{};
  Dims dims{64, 64};             // synthetic target size, or resize target for --image
  bool dims_explicit = false;
  Dims heads{8, 8};              // fit
  std::vector<Dims> head_list{{1, 1}, {8, 8}, {64, 64}};
  std::vector<std::size_t> octave_list{1, 2, 3, 4, 5};
  std::size_t alpha = 32;
  std::size_t epochs = 2000;
  std::uint64_t seed = 0;
  double lr = 1e-3;
  std::optional<double> baseline_lr;  // compare: Siren/Fourier rate; unset means lr
  std::vector<std::size_t> body_widths{256, 256, 256, 256};
  std::vector<std::size_t> compare_alphas{64, 256};  // one parameter budget per alpha
  Dims compare_heads{64, 64};
  Dims render{512, 512};         // FLOPs accounting resolution for compare
  std::optional<Dims> eval_dims; // fit: optional render/evaluation resolution
  std::filesystem::path out_dir = "out";
  std::filesystem::path out_file = "perlin.pgm";
  bool paper_scale = false;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Full-size defaults: 256x256 Perlin targets with octaves 1..8 and head
// grids 1..256^2, 2000 epochs, 512x512 comparison renders.
inline void apply_paper_scale(ExperimentConfig& cfg) {
  cfg.paper_scale = true;
  cfg.epochs = 2000;
  cfg.render = {512, 512};
  switch (cfg.kind) {
    case ExperimentKind::SweepOctaves:
      cfg.dims = {256, 256};
      cfg.octave_list = {1, 2, 3, 4, 5, 6, 7, 8};
      cfg.head_list = {{1, 1}, {2, 2}, {4, 4}, {8, 8}, {16, 16}, {32, 32}, {64, 64}, {128, 128}, {256, 256}};
      break;
    case ExperimentKind::SweepHeads:
      cfg.dims = {512, 512};
      cfg.head_list = {{1, 1}, {2, 2}, {4, 4}, {8, 8}, {16, 16}, {32, 32}, {64, 64}, {128, 128}, {256, 256}};
      break;
    case ExperimentKind::Compare:
      cfg.dims = {512, 512};
      break;
    case ExperimentKind::Fit:
    case ExperimentKind::Perlin:
      cfg.dims = {256, 256};
      break;
  }
}

/// Per-command desk-scale defaults.
inline ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  switch (kind) {
    case ExperimentKind::SweepHeads:
      cfg.dims = {256, 256};
      cfg.head_list = {{1, 1}, {4, 4}, {16, 16}, {32, 32}, {64, 64}, {128, 128}};
      break;
    case ExperimentKind::Compare:
      cfg.dims = {128, 128};
      cfg.epochs = 300;
      cfg.compare_alphas = {64};
      cfg.render = {128, 128};
      break;
    case ExperimentKind::Perlin:
      cfg.dims = {256, 256};
      break;
    case ExperimentKind::Fit:
    case ExperimentKind::SweepOctaves:
      break;
  }
  return cfg;
}

/// Setting keys accepted in config files and (with a leading "--") on the command line.
inline const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys{
      "model",       "image",         "dims",           "heads",       "head-list", "octaves",
      "octave-list", "perlin-seed", "persistence",   "lacunarity",     "base-frequency", "alpha",  "epochs",
      "seed",        "lr",            "baseline-lr",    "body",        "compare-alphas",
      "compare-heads", "render",      "eval-dims",      "out-dir",     "out"};
  return keys;
}

// Applies one key = value setting. Unknown keys and malformed values are
// errors, reported before any computation starts.
inline void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  try {
    if (key == "model") cfg.model = models::parse_model_kind(value);
    else if (key == "image") cfg.image = value;
    else if (key == "dims") { cfg.dims = parse_dims(value); cfg.dims_explicit = true; }
    else if (key == "heads") cfg.heads = parse_dims(value);
    else if (key == "head-list") {
      cfg.head_list.clear();
      for (const auto& item : split_list(value)) cfg.head_list.push_back(parse_dims(item));
    }
    else if (key == "octaves") cfg.perlin.octaves = parse_count(value);
    else if (key == "octave-list") cfg.octave_list = parse_count_list(value);
    else if (key == "perlin-seed") cfg.perlin.seed = parse_count(value);
    else if (key == "persistence") cfg.perlin.persistence = parse_double(value);
    else if (key == "lacunarity") cfg.perlin.lacunarity = parse_double(value);
    else if (key == "base-frequency") cfg.perlin.base_frequency = parse_double(value);
    else if (key == "alpha") cfg.alpha = parse_count(value);
    else if (key == "epochs") cfg.epochs = parse_count(value);
    else if (key == "seed") cfg.seed = parse_count(value);
    else if (key == "lr") cfg.lr = parse_double(value);
    else if (key == "baseline-lr") cfg.baseline_lr = parse_double(value);
    else if (key == "body") cfg.body_widths = parse_count_list(value);
    else if (key == "compare-alphas") cfg.compare_alphas = parse_count_list(value);
    else if (key == "compare-heads") cfg.compare_heads = parse_dims(value);
    else if (key == "render") cfg.render = parse_dims(value);
    else if (key == "eval-dims") cfg.eval_dims = parse_dims(value);
    else if (key == "out-dir") cfg.out_dir = value;
    else if (key == "out") cfg.out_file = value;
    else throw ContractError("unknown setting '" + key + "'");
  } catch (const ContractError& e) {
    const std::string what = e.what();
    if (what.rfind("unknown setting", 0) == 0) throw;
    throw ContractError("setting '" + key + "': " + what);
  }
}

// Config file: one "key = value" per line; '#' starts a comment; blank
// lines are ignored. Keys are the long CLI flag names without dashes.
inline std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> settings;
  std::size_t line_no = 0;
  std::size_t start = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ContractError("config line " + std::to_string(line_no) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ContractError("config line " + std::to_string(line_no) + ": empty key");
    settings.emplace_back(key, value);
  }
  return settings;
}

using Settings = std::vector<std::pair<std::string, std::string>>;

// Layering: command defaults, then paper scale (flag or "paper-scale = true"
// in the file), then file settings, then flags. Flags win.
inline ExperimentConfig resolve_config(ExperimentKind kind, bool paper_scale, const Settings& file_settings,
                                       const Settings& flag_settings) {
  ExperimentConfig cfg = default_config(kind);
  for (const auto& [key, value] : file_settings) {
    if (key != "paper-scale") continue;
    detail::require(value == "true" || value == "false", "setting 'paper-scale': expected true or false");
    paper_scale = paper_scale || value == "true";
  }
  if (paper_scale) apply_paper_scale(cfg);
  for (const auto& [key, value] : file_settings) {
    if (key != "paper-scale") apply_setting(cfg, key, value);
  }
  for (const auto& [key, value] : flag_settings) apply_setting(cfg, key, value);
  return cfg;
}

inline void validate(const ExperimentConfig& cfg) {
  auto req = [](bool ok, const std::string& msg) { detail::require(ok, "invalid configuration: " + msg); };
  req(cfg.epochs >= 1, "epochs must be >= 1");
  req(cfg.lr > 0.0 && cfg.baseline_lr.value_or(cfg.lr) > 0.0, "learning rates must be positive");
  req(!cfg.body_widths.empty(), "body needs at least one layer");
  req(cfg.dims.rows >= 1 && cfg.dims.cols >= 1, "dims must be positive");
  req(cfg.alpha >= 1 && cfg.alpha <= cfg.body_widths.back(), "alpha must be in [1, last body width]");
  signal::PerlinSpec p = cfg.perlin;
  p.validate();
  switch (cfg.kind) {
    case ExperimentKind::Fit:
      req(cfg.heads.rows >= 1 && cfg.heads.cols >= 1, "heads must be at least 1x1");
      if (!cfg.image) {
        req(cfg.dims.rows % cfg.heads.rows == 0 && cfg.dims.cols % cfg.heads.cols == 0,
            "dims " + to_string(cfg.dims) + " not divisible by heads " + to_string(cfg.heads));
      }
      break;
    case ExperimentKind::SweepOctaves:
      req(!cfg.octave_list.empty() && !cfg.head_list.empty(), "octave and head lists must be non-empty");
      for (auto o : cfg.octave_list) req(o >= 1, "octaves must be >= 1");
      for (const auto& h : cfg.head_list) {
        req(h.rows >= 1 && h.cols >= 1 && cfg.dims.rows % h.rows == 0 && cfg.dims.cols % h.cols == 0,
            "head grid " + to_string(h) + " does not divide " + to_string(cfg.dims));
      }
      break;
    case ExperimentKind::SweepHeads:
      req(cfg.image.has_value(), "sweep-heads needs --image");
      req(cfg.dims.rows % 2 == 0 && cfg.dims.cols % 2 == 0, "original dims must be even");
      for (const auto& h : cfg.head_list) {
        req(h.rows >= 1 && h.cols >= 1 && (cfg.dims.rows / 2) % h.rows == 0 && (cfg.dims.cols / 2) % h.cols == 0,
            "head grid " + to_string(h) + " does not divide the training size");
      }
      break;
    case ExperimentKind::Compare:
      req(cfg.image.has_value(), "compare needs --image");
      req(!cfg.compare_alphas.empty(), "compare-alphas must be non-empty");
      req(cfg.dims.rows % cfg.compare_heads.rows == 0 && cfg.dims.cols % cfg.compare_heads.cols == 0,
          "compare heads must divide dims");
      req(cfg.render.rows % cfg.compare_heads.rows == 0 && cfg.render.cols % cfg.compare_heads.cols == 0,
          "compare heads must divide the render size");
      for (auto a : cfg.compare_alphas) req(a >= 1 && a <= cfg.body_widths.back(), "compare alpha out of range");
      break;
    case ExperimentKind::Perlin:
      break;
  }
}

}  // namespace mhinr::experiments
