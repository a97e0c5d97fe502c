#pragma once

namespace qafm {

inline constexpr const char* kVersion = "0.1.0";

} // namespace qafm
