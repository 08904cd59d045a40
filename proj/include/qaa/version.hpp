#pragma once

namespace qaa {

inline constexpr const char* k_version = "0.1.0";

}  // namespace qaa
