#pragma once

namespace nwig {

inline constexpr const char* kToolName = "nwig";
inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace nwig
