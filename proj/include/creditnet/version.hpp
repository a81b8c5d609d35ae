#pragma once

namespace creditnet {

inline constexpr const char* kToolName = "creditnet";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace creditnet
