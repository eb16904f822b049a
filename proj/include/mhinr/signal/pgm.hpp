#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "mhinr/error.hpp"
#include "mhinr/signal/image.hpp"

namespace mhinr::signal {

namespace pgm_detail {

// Next whitespace-delimited header token, skipping '#' comments.
inline std::string next_token(const std::vector<std::uint8_t>& bytes, std::size_t& pos) {
  auto is_space = [](std::uint8_t ch) { return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\v' || ch == '\f'; };
  while (pos < bytes.size()) {
    if (is_space(bytes[pos])) {
      ++pos;
    } else if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
  std::string token;
  while (pos < bytes.size() && !is_space(bytes[pos]) && bytes[pos] != '#') token.push_back(static_cast<char>(bytes[pos++]));
  if (token.empty()) throw IoError("PGM: truncated header");
  return token;
}

inline std::size_t parse_positive(const std::string& token, const char* field) {
  std::size_t value = 0;
  for (char ch : token) {
    if (ch < '0' || ch > '9') throw IoError(std::string("PGM: malformed ") + field + " '" + token + "'");
    value = value * 10 + static_cast<std::size_t>(ch - '0');
    if (value > (1u << 24)) throw IoError(std::string("PGM: ") + field + " too large");
  }
  if (value == 0) throw IoError(std::string("PGM: ") + field + " must be positive");
  return value;
}

}  // namespace pgm_detail

/// 8-bit quantization with round-half-up.
inline std::uint8_t quantize_pixel(double v) {
  const double scaled = std::floor(v * 255.0 + 0.5);
  return static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
}

/// Decodes a binary (P5) PGM with maxval <= 255; sample p maps to p / maxval.
inline Image decode_pgm(const std::vector<std::uint8_t>& bytes) {
  std::size_t pos = 0;
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw IoError("PGM: missing P5 magic");
  pos = 2;
  const std::size_t cols = pgm_detail::parse_positive(pgm_detail::next_token(bytes, pos), "width");
  const std::size_t rows = pgm_detail::parse_positive(pgm_detail::next_token(bytes, pos), "height");
  const std::size_t maxval = pgm_detail::parse_positive(pgm_detail::next_token(bytes, pos), "maxval");
  if (maxval > 255) throw IoError("PGM: only 8-bit samples are supported (maxval " + std::to_string(maxval) + ")");
  if (pos >= bytes.size()) throw IoError("PGM: missing raster");
  ++pos;  // the single whitespace byte that ends the header
  if (bytes.size() - pos < rows * cols) throw IoError("PGM: raster truncated");
  std::vector<double> px(rows * cols);
  for (std::size_t i = 0; i < px.size(); ++i) {
    const std::size_t sample = bytes[pos + i];
    if (sample > maxval) throw IoError("PGM: sample exceeds maxval");
    px[i] = static_cast<double>(sample) / static_cast<double>(maxval);
  }
  return Image(rows, cols, std::move(px));
}

inline std::vector<std::uint8_t> encode_pgm(const Image& img) {
  const std::string header = "P5\n" + std::to_string(img.cols()) + " " + std::to_string(img.rows()) + "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.reserve(header.size() + img.size());
  for (double v : img.pixels()) bytes.push_back(quantize_pixel(v));
  return bytes;
}

inline Image load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_pgm(bytes);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

inline void save_image(const Image& img, const std::filesystem::path& path) {
  const auto bytes = encode_pgm(img);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write image " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace mhinr::signal
