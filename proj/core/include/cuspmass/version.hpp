#pragma once

namespace cuspmass {

inline constexpr const char* kVersion = "0.1.0";
// Bumped whenever the eigen cache layout or the generator changes.
inline constexpr int kEigenCacheVersion = 1;

}  // namespace cuspmass
