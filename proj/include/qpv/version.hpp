#pragma once

namespace qpv {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace qpv
