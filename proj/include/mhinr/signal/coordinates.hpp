#pragma once

#include <cstddef>
#include <vector>

#include "mhinr/error.hpp"

namespace mhinr::signal {

/// Maps pixel index r in 1..n onto [-1, 1]: 2 (r - 1) / (n - 1) - 1.
inline double normalize_global(std::size_t r, std::size_t n) {
  detail::require(n >= 2, "normalize_global: domain needs at least 2 samples");
  detail::require(r >= 1 && r <= n, "normalize_global: index outside 1..n");
  return 2.0 * static_cast<double>(r - 1) / static_cast<double>(n - 1) - 1.0;
}

// Cell-local coordinate: same endpoint convention over the cell extent,
// so every head sees inputs spanning [-1, 1]. A one-pixel cell maps to 0.
inline double normalize_local(std::size_t r, std::size_t cell_extent) {
  detail::require(cell_extent >= 1 && r >= 1 && r <= cell_extent, "normalize_local: index outside 1..extent");
  if (cell_extent == 1) return 0.0;
  return 2.0 * static_cast<double>(r - 1) / static_cast<double>(cell_extent - 1) - 1.0;
}

/// All coordinates 1..n of one axis.
inline std::vector<double> local_axis(std::size_t cell_extent) {
  std::vector<double> axis(cell_extent);
  for (std::size_t r = 1; r <= cell_extent; ++r) axis[r - 1] = normalize_local(r, cell_extent);
  return axis;
}

}  // namespace mhinr::signal
