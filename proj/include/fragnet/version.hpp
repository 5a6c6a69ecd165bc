#pragma once

namespace fragnet {

inline constexpr const char* engine_version = "fragnet 0.1.0";

}  // namespace fragnet
