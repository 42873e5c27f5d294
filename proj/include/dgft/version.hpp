#pragma once

namespace dgft {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dgft
