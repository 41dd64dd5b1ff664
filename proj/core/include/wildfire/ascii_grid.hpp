#pragma once

#include <filesystem>
#include <iosfwd>

#include "wildfire/raster.hpp"

namespace wildfire {

/// Reads an ESRI ASCII grid. The header gives the lower-left corner, so
/// origin_y = yllcorner + nrows * cellsize. NODATA tokens become the
/// grid's nodata sentinel (default -9999 when the header omits it).
Grid read_ascii_grid(std::istream& in, CrsKind crs = CrsKind::Planar,
                     double default_nodata = kDefaultNodata);
Grid read_ascii_grid(const std::filesystem::path& path,
                     CrsKind crs = CrsKind::Planar,
                     double default_nodata = kDefaultNodata);

/// Writes a grid as ESRI ASCII with 6 significant digits. read(write(g))
/// reproduces values, mask and frame exactly for values already
/// representable at that precision.
void write_ascii_grid(const Grid& g, std::ostream& out);
void write_ascii_grid(const Grid& g, const std::filesystem::path& path);

}  // namespace wildfire
