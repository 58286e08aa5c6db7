#pragma once

#include <string_view>

namespace garfield {

inline constexpr std::string_view version = "1.0.0";

}  // namespace garfield
