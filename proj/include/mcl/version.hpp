#pragma once

namespace mcl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mcl
