#pragma once

namespace socsearch {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace socsearch
