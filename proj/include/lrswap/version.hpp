#pragma once

namespace lrswap {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lrswap
