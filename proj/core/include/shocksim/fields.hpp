#pragma once

#include "shocksim/grid.hpp"

namespace shocksim {

/// Riemann-variable fields (W, Z, A2, A3) on a grid at self-similar time s.
/// Burgers runs evolve only W; has_za marks whether Z/A are allocated.
struct FieldState {
    Grid3 grid;
    double s = 0.0;
    Field W, Z, A2, A3;
    bool has_za = true;

    FieldState() = default;
    FieldState(const Grid3& g, double s_, bool with_za = true)
        : grid(g), s(s_), has_za(with_za) {
        W.assign(g.size(), 0.0);
        if (with_za) {
            Z.assign(g.size(), 0.0);
            A2.assign(g.size(), 0.0);
            A3.assign(g.size(), 0.0);
        }
    }
};

} // namespace shocksim
