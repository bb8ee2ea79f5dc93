#pragma once

#include <string_view>

namespace hypodist {

inline constexpr std::string_view kVersion = "0.1.0";

constexpr std::string_view kVersionString() noexcept { return kVersion; }

} // namespace hypodist
