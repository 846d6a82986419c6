#pragma once

#include <string>

#include "shocksim/fields.hpp"

namespace shocksim {

/// Snapshot files carry a self-describing text header followed by the field
/// payload, row-major, either raw little-endian doubles or CSV. Output is
/// byte-stable for identical config and build.
void write_snapshot(const std::string& path, const FieldState& state,
                    const std::string& config_hash, const std::string& format);

FieldState read_snapshot(const std::string& path);

} // namespace shocksim
