#pragma once

namespace shocksim {

inline constexpr const char* kVersion = "0.1.0";

} // namespace shocksim
