#pragma once

namespace trappair {

inline constexpr const char* kVersion = "1.0.0";

} // namespace trappair
