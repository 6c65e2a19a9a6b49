#pragma once

namespace grassdyn {

inline constexpr const char* kVersion = "0.1.0";

} // namespace grassdyn
