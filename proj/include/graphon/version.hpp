#pragma once

namespace graphon {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace graphon
