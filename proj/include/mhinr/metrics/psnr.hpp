#pragma once

#include <cmath>
#include <cstddef>

#include "mhinr/signal/image.hpp"

namespace mhinr::metrics {

/// PSNR reported for an exact match (mse == 0).
inline constexpr double kPsnrCapDb = 100.0;

struct PsnrResult {
  double mse = 0.0;
  double psnr_db = kPsnrCapDb;
  bool capped = true;
};

inline double mse(const signal::Image& a, const signal::Image& b) {
  detail::require(a.rows() == b.rows() && a.cols() == b.cols(), "mse: image dimensions differ");
  detail::require(!a.empty(), "mse: empty images");
  const auto& pa = a.pixels();
  const auto& pb = b.pixels();
  double sum = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double d = pa[i] - pb[i];
    sum += d * d;
  }
  return sum / static_cast<double>(pa.size());
}

// 10 log10(MAX^2 / mse) with MAX = 1; exact matches report the cap.
inline PsnrResult psnr_from_mse(double mse_value) {
  if (mse_value <= 0.0) return {0.0, kPsnrCapDb, true};
  const double db = 10.0 * std::log10(1.0 / mse_value);
  if (db >= kPsnrCapDb) return {mse_value, kPsnrCapDb, true};
  return {mse_value, db, false};
}

inline PsnrResult psnr(const signal::Image& a, const signal::Image& b) { return psnr_from_mse(mse(a, b)); }

}  // namespace mhinr::metrics
