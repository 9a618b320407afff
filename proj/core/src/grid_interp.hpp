#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "arraycap/error.hpp"
#include "text_io.hpp"

namespace arraycap::detail {

/// Bracketing nodes and the weight of the upper node for a 1-D lookup.
struct Bracket {
  std::size_t lo;
  std::size_t hi;
  double t;
};

/// Locates `x` on an ascending grid. A single-node axis only accepts its node.
inline Bracket bracket(const std::vector<double>& grid, double x, const char* axis) {
  const double span = grid.back() - grid.front();
  const double slack = 1e-12 * std::max(1.0, std::max(std::abs(grid.front()), std::abs(grid.back())));
  if (!(x >= grid.front() - slack && x <= grid.back() + slack))
    throw OutOfRange(std::string(axis) + " " + format_number(x) + " lies outside the table grid [" +
                     format_number(grid.front()) + ", " + format_number(grid.back()) + "]");
  if (grid.size() == 1 || span == 0.0) return {0, 0, 0.0};
  x = std::clamp(x, grid.front(), grid.back());
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  if (hi >= grid.size()) hi = grid.size() - 1;
  const std::size_t lo = hi - 1;
  const double t = (x - grid[lo]) / (grid[hi] - grid[lo]);
  return {lo, hi, t};
}

inline void require_ascending(const std::vector<double>& grid, const std::string& what) {
  if (grid.empty()) throw InvalidArgument(what + " grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw InvalidArgument(what + " grid is not strictly ascending");
}

}  // namespace arraycap::detail
