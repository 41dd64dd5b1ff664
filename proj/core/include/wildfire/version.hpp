#pragma once

namespace wildfire {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace wildfire
