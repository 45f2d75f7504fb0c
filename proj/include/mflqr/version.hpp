#pragma once

namespace mflqr {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mflqr
