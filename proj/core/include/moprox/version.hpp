#pragma once

namespace moprox {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace moprox
