#pragma once

#include <string>

#include "arraycap/capacity.hpp"

namespace arraycap::cli {

/// Polar plot for azimuth maps, line plot otherwise (log frequency axis
/// when every abscissa is positive).
std::string render_svg(const CapacityMap& map);

}  // namespace arraycap::cli
