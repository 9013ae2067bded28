#pragma once

namespace fracorder {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fracorder
