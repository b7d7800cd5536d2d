#pragma once

namespace vxf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace vxf
