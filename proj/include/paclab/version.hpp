#pragma once

namespace paclab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace paclab
