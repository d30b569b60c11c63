#pragma once

namespace chiralwalk {

inline constexpr const char* kToolName = "chiralwalk";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace chiralwalk
