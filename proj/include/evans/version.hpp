#pragma once

namespace evans {

inline constexpr const char* kVersion = "0.1.0";

} // namespace evans
