#pragma once

#include "wildfire/stack.hpp"

namespace wildfire {

enum class Season { Cold, Warm };

/// Cold: November-April. Warm: May-October.
Season season_of(int month);

const char* season_name(Season s);

/// Per-cell mean or median across a dynamic band's year layers, skipping
/// nodata. A cell with no valid year stays nodata.
Grid aggregate(const BandData& band);
Grid aggregate(const BandData& band, AggregationPolicy policy);

/// Per-cell deviation of one year from the band's temporal mean. Nodata
/// propagates when either term is missing.
Grid anomaly(const BandData& band, int year);

}  // namespace wildfire
