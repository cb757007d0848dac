#pragma once

namespace asepkpz {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace asepkpz
