#pragma once

namespace mflat {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mflat
