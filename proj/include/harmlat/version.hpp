#pragma once

namespace harmlat {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace harmlat
