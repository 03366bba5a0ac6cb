#pragma once

namespace esch {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace esch
