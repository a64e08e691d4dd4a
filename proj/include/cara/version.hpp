#pragma once

namespace cara {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kJsonSchema = 1;

}  // namespace cara
