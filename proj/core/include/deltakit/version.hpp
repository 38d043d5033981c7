#pragma once

namespace deltakit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace deltakit
