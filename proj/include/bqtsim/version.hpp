#pragma once

namespace bqtsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bqtsim
