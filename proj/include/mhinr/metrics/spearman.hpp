#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "mhinr/error.hpp"

namespace mhinr::metrics {

/// 1-based ranks; tied values share the average of their ranks.
inline std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

// Spearman correlation between position in the list and value: Pearson
// correlation of the rank vectors. A constant list has no trend and yields 0.
inline double spearman_trend(std::span<const double> xs) {
  detail::require(xs.size() >= 3, "spearman_trend: need at least 3 values");
  const auto value_ranks = average_ranks(xs);
  const double n = static_cast<double>(xs.size());
  const double mean = (n + 1.0) / 2.0;
  double cov = 0.0;
  double var_index = 0.0;
  double var_value = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double di = static_cast<double>(i + 1) - mean;
    const double dv = value_ranks[i] - mean;
    cov += di * dv;
    var_index += di * di;
    var_value += dv * dv;
  }
  if (var_value == 0.0) return 0.0;
  return std::clamp(cov / std::sqrt(var_index * var_value), -1.0, 1.0);
}

}  // namespace mhinr::metrics
