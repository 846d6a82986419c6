#include "shocksim/physical1d.hpp"

#include <algorithm>
#include <cmath>

#include "shocksim/errors.hpp"
#include "shocksim/textio.hpp"

namespace shocksim::solver {

namespace {

// C^1 cubic Hermite on a uniform grid with 4th-order FD slopes.
struct Hermite {
    const std::vector<double>& x;
    const std::vector<double>& v;
    std::vector<double> slope;

    explicit Hermite(const std::vector<double>& x_, const std::vector<double>& v_)
        : x(x_), v(v_) {
        const std::size_t n = x.size();
        slope.resize(n);
        const double h = x[1] - x[0];
        for (std::size_t i = 0; i < n; ++i) {
            if (i >= 2 && i + 2 < n)
                slope[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
            else if (i == 0)
                slope[i] = (v[1] - v[0]) / h;
            else if (i + 1 == n)
                slope[i] = (v[n - 1] - v[n - 2]) / h;
            else
                slope[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
        }
    }

    double eval(double xx) const {
        const double h = x[1] - x[0];
        if (xx <= x.front()) return v.front();
        if (xx >= x.back()) return v.back();
        const std::size_t i = std::min(
            x.size() - 2, static_cast<std::size_t>(std::floor((xx - x.front()) / h)));
        const double t = (xx - x[i]) / h;
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
        const double h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t);
        const double h11 = t * t * (t - 1);
        return h00 * v[i] + h10 * h * slope[i] + h01 * v[i + 1] + h11 * h * slope[i + 1];
    }

    double deriv(double xx) const {
        const double h = x[1] - x[0];
        if (xx <= x.front() || xx >= x.back()) return 0.0;
        const std::size_t i = std::min(
            x.size() - 2, static_cast<std::size_t>(std::floor((xx - x.front()) / h)));
        const double t = (xx - x[i]) / h;
        const double d00 = 6 * t * (t - 1);
        const double d10 = (1 - t) * (1 - 3 * t);
        const double d01 = -6 * t * (t - 1);
        const double d11 = t * (3 * t - 2);
        return (d00 * v[i] + d01 * v[i + 1]) / h + d10 * slope[i] + d11 * slope[i + 1];
    }
};

} // namespace

Physical1D step_physical_1d(const Physical1D& state, double dt) {
    if (state.x.size() < 8) throw SimError("step_physical_1d needs at least 8 nodes");
    const Hermite w0(state.x, state.w);
    const double h = state.x[1] - state.x[0];

    // pre-blowup gate: the characteristic map must stay monotone
    double min_g = 1e300;
    for (std::size_t i = 0; i + 1 < state.x.size(); ++i) {
        const double sl = (state.w[i + 1] - state.w[i]) / h;
        min_g = std::min(min_g, 1.0 + sl * dt);
    }
    if (min_g <= 0.0)
        throw CharacteristicsCrossed("1 + dt min w' = " + fmt_g(min_g, 6));

    Physical1D out;
    out.x = state.x;
    out.w.resize(state.x.size());
    for (std::size_t i = 0; i < state.x.size(); ++i) {
        const double target = state.x[i];
        // bracket the departure point using the node images of the map
        double lo = state.x.front(), hi = state.x.back();
        // G(x0) = x0 + w(x0) dt is monotone; bisect then polish with Newton
        auto G = [&](double x0) { return x0 + w0.eval(x0) * dt - target; };
        double glo = G(lo), ghi = G(hi);
        if (glo > 0.0) {
            out.w[i] = state.w.front();
            continue;
        }
        if (ghi < 0.0) {
            out.w[i] = state.w.back();
            continue;
        }
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double gm = G(mid);
            if (gm <= 0.0)
                lo = mid;
            else
                hi = mid;
        }
        double x0 = 0.5 * (lo + hi);
        for (int it = 0; it < 4; ++it) {
            const double gp = 1.0 + w0.deriv(x0) * dt;
            if (gp <= 0.1) break;
            x0 -= G(x0) / gp;
            x0 = std::max(state.x.front(), std::min(state.x.back(), x0));
        }
        out.w[i] = w0.eval(x0);
    }
    return out;
}

double characteristics_solve(const std::function<double(double)>& w0, double x, double dt,
                             double search_halfwidth) {
    auto G = [&](double x0) { return x0 + w0(x0) * dt - x; };
    double lo = x - search_halfwidth, hi = x + search_halfwidth;
    double glo = G(lo), ghi = G(hi);
    int expand = 0;
    while (glo * ghi > 0.0 && expand++ < 60) {
        lo -= search_halfwidth;
        hi += search_halfwidth;
        glo = G(lo);
        ghi = G(hi);
    }
    if (glo * ghi > 0.0)
        throw CharacteristicsCrossed("no departure point bracket at x = " + fmt_g(x, 6));
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = G(mid);
        if (glo * gm <= 0.0)
            hi = mid;
        else {
            lo = mid;
            glo = gm;
        }
    }
    return w0(0.5 * (lo + hi));
}

} // namespace shocksim::solver
