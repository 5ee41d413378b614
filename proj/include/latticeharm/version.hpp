#pragma once

namespace latticeharm {

inline constexpr const char* kVersion = "latticeharm 0.1.0";

}  // namespace latticeharm
