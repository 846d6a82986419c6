#pragma once

#include <cstdint>

#include "shocksim/vec.hpp"

namespace shocksim {

/// Halton sequence in bases 2,3,5 — deterministic quasi-random samples for
/// the property sweeps.
inline double halton(std::uint64_t i, std::uint64_t base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

/// i-th Halton point mapped to the cube [-half, half]^3.
inline Vec3 halton_cube(std::uint64_t i, double half) {
    return {half * (2.0 * halton(i + 1, 2) - 1.0),
            half * (2.0 * halton(i + 1, 3) - 1.0),
            half * (2.0 * halton(i + 1, 5) - 1.0)};
}

} // namespace shocksim
