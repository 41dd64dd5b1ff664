#pragma once

#include <map>

#include "wildfire/raster.hpp"

namespace wildfire {

/// Recodes a categorical grid using an explicit category -> integer
/// priority ordering. Every non-nodata cell value must appear as a key.
Grid label_encode(const Grid& g, const std::map<double, int>& ordering);

}  // namespace wildfire
