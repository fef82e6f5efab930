#pragma once

namespace starkc {

inline constexpr const char* kVersion = "0.1.0";

} // namespace starkc
