#pragma once

namespace ncsim {

inline constexpr const char* kVersion = "0.1.0";

// RNG identity echoed into every output header so runs are citable.
inline constexpr const char* kGeneratorId = "xoshiro256++(splitmix64-seeded)";

}  // namespace ncsim
