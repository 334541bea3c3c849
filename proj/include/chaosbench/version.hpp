#pragma once

namespace chaos {

inline constexpr const char* kToolkitVersion = "chaosbench 0.1.0";

}  // namespace chaos
