#pragma once

namespace rdsync {

inline constexpr const char* kVersion = "0.1.0";

} // namespace rdsync
