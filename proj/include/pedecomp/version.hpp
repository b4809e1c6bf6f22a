#pragma once

namespace pedecomp {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pedecomp
