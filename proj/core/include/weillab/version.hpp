#pragma once

namespace weillab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace weillab
