#pragma once

namespace nhlatt {

inline constexpr const char* kVersion = "0.1.0";

} // namespace nhlatt
