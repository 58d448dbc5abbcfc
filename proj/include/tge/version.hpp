#pragma once

namespace tge {

inline constexpr const char* kToolName = "tge";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace tge
