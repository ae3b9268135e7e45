#pragma once

namespace tagsim {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "tagsim";

}  // namespace tagsim
