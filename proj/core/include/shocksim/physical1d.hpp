#pragma once

#include <functional>
#include <vector>

namespace shocksim::solver {

/// 1D Burgers state sampled on a fixed x-grid.
struct Physical1D {
    std::vector<double> x;
    std::vector<double> w;
};

/// Exact method of characteristics over one step: inverts the monotone map
/// x0 -> x0 + w(x0) dt with a piecewise-cubic interpolant of w. Throws
/// CharacteristicsCrossed when 1 + dt min w' <= 0.
Physical1D step_physical_1d(const Physical1D& state, double dt);

/// Characteristics solve directly from an analytic initial profile:
/// w(x, t0 + dt) with w0 given as a callable. Pre-blowup only.
double characteristics_solve(const std::function<double(double)>& w0, double x, double dt,
                             double search_halfwidth);

} // namespace shocksim::solver
