#include "shocksim/grid.hpp"

#include <cmath>

#include "shocksim/errors.hpp"
#include "shocksim/profiles.hpp"

namespace shocksim {

Grid3::Grid3(int n1_, int n2_, int n3_, const Vec3& extent_)
    : n1(n1_), n2(n2_), n3(n3_), extent(extent_) {
    if (n1 < 1 || n2 < 1 || n3 < 1) throw ConfigError("grid node counts must be >= 1");
    if (n1 % 2 == 0 || n2 % 2 == 0 || n3 % 2 == 0)
        throw ConfigError("grid node counts must be odd so y = 0 is a node");
    if ((n1 > 1 && !(extent.x1 > 0.0)) || (n2 > 1 && !(extent.x2 > 0.0)) ||
        (n3 > 1 && !(extent.x3 > 0.0)))
        throw ConfigError("non-degenerate axes need positive extent");
    spacing_[0] = n1 > 1 ? 2.0 * extent.x1 / (n1 - 1) : 0.0;
    spacing_[1] = n2 > 1 ? 2.0 * extent.x2 / (n2 - 1) : 0.0;
    spacing_[2] = n3 > 1 ? 2.0 * extent.x3 / (n3 - 1) : 0.0;
}

namespace {

int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

} // namespace

double node_value(const Field& f, const Grid3& g, int i, int j, int k, Extension ext) {
    const bool in1 = i >= 0 && i < g.n1;
    const bool in2 = j >= 0 && j < g.n2;
    const bool in3 = k >= 0 && k < g.n3;
    if (in1 && in2 && in3) return f[g.index(i, j, k)];
    if (ext == Extension::Zero) return 0.0;
    if (ext == Extension::ClampEdge)
        return f[g.index(clampi(i, 0, g.n1 - 1), clampi(j, 0, g.n2 - 1),
                         clampi(k, 0, g.n3 - 1))];

    // clamped linear extrapolation along each poking axis, with the overall
    // magnitude capped by 2 eta^{1/6} at the virtual node position
    const int ci = clampi(i, 0, g.n1 - 1);
    const int cj = clampi(j, 0, g.n2 - 1);
    const int ck = clampi(k, 0, g.n3 - 1);
    double v = f[g.index(ci, cj, ck)];
    auto one_sided = [&](int axis, int overshoot) {
        if (overshoot == 0) return 0.0;
        const int nn = g.n(axis);
        if (nn < 2) return 0.0;
        int e0, e1;
        if (overshoot > 0) {
            e0 = nn - 1;
            e1 = nn - 2;
        } else {
            e0 = 0;
            e1 = 1;
        }
        int ii = ci, jj = cj, kk = ck;
        (axis == 0 ? ii : axis == 1 ? jj : kk) = e0;
        const double ve0 = f[g.index(ii, jj, kk)];
        (axis == 0 ? ii : axis == 1 ? jj : kk) = e1;
        const double ve1 = f[g.index(ii, jj, kk)];
        return std::abs(overshoot) * (ve0 - ve1);
    };
    v += one_sided(0, i - ci) + one_sided(1, j - cj) + one_sided(2, k - ck);

    const Vec3 y{g.coord(0, 0) + g.h(0) * i, g.coord(1, 0) + g.h(1) * j,
                 g.coord(2, 0) + g.h(2) * k};
    const double cap = 2.0 * std::pow(profiles::weights(y).eta, 1.0 / 6.0);
    if (v > cap) v = cap;
    if (v < -cap) v = -cap;
    return v;
}

namespace {

inline void cubic_weights(double t, double w[4]) {
    w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
    w[1] = (t * t - 1.0) * (t - 2.0) * 0.5;
    w[2] = -t * (t + 1.0) * (t - 2.0) * 0.5;
    w[3] = t * (t * t - 1.0) / 6.0;
}

} // namespace

double sample(const Field& f, const Grid3& g, const Vec3& y, Extension ext) {
    int base[3] = {0, 0, 0};
    double wts[3][4];
    int nsten[3] = {1, 1, 1};

    for (int axis = 0; axis < 3; ++axis) {
        const int nn = g.n(axis);
        if (nn == 1) {
            wts[axis][0] = 1.0;
            base[axis] = 0;
            continue;
        }
        const double h = g.h(axis);
        const double rel = (y[axis] + g.extent[axis]) / h;
        int ib = static_cast<int>(std::floor(rel));
        double t = rel - ib;
        // keep |t| growth bounded when the point itself is out of range
        if (ib < -2) {
            ib = -2;
            t = rel - ib;
        }
        if (ib > nn) {
            ib = nn;
            t = rel - ib;
        }
        base[axis] = ib - 1;
        cubic_weights(t, wts[axis]);
        nsten[axis] = 4;
    }

    // fast path: all stencil nodes interior
    const bool interior = base[0] >= 0 && base[0] + nsten[0] - 1 < g.n1 && base[1] >= 0 &&
                          base[1] + nsten[1] - 1 < g.n2 && base[2] >= 0 &&
                          base[2] + nsten[2] - 1 < g.n3 && nsten[0] == 4 && nsten[1] == 4 &&
                          nsten[2] == 4;
    double sum = 0.0;
    if (interior) {
        for (int a = 0; a < 4; ++a) {
            const double wa = wts[0][a];
            for (int b = 0; b < 4; ++b) {
                const double wab = wa * wts[1][b];
                const double* row = &f[g.index(base[0] + a, base[1] + b, base[2])];
                double acc = 0.0;
                for (int c = 0; c < 4; ++c) acc += wts[2][c] * row[c];
                sum += wab * acc;
            }
        }
        return sum;
    }
    for (int a = 0; a < nsten[0]; ++a)
        for (int b = 0; b < nsten[1]; ++b)
            for (int c = 0; c < nsten[2]; ++c) {
                const double w = wts[0][a] * wts[1][b] * wts[2][c];
                if (w == 0.0) continue;
                sum += w * node_value(f, g, base[0] + a, base[1] + b, base[2] + c, ext);
            }
    return sum;
}

double deriv1_4th(const Field& f, const Grid3& g, int axis, int i, int j, int k) {
    const int nn = g.n(axis);
    if (nn == 1) return 0.0;
    if (nn < 5) throw GridTooCoarse("axis needs >= 5 nodes for 4th-order differences");
    const double h = g.h(axis);
    int c = axis == 0 ? i : (axis == 1 ? j : k);
    auto at = [&](int off) {
        int ii = i, jj = j, kk = k;
        (axis == 0 ? ii : axis == 1 ? jj : kk) = c + off;
        return f[g.index(ii, jj, kk)];
    };
    if (c >= 2 && c <= nn - 3) {
        return (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) / (12.0 * h);
    }
    // one-sided / offset 4th-order stencils at the edges
    if (c == 0)
        return (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) /
               (12.0 * h);
    if (c == 1)
        return (-3.0 * at(-1) - 10.0 * at(0) + 18.0 * at(1) - 6.0 * at(2) + at(3)) /
               (12.0 * h);
    if (c == nn - 1)
        return (25.0 * at(0) - 48.0 * at(-1) + 36.0 * at(-2) - 16.0 * at(-3) + 3.0 * at(-4)) /
               (12.0 * h);
    return (3.0 * at(1) + 10.0 * at(0) - 18.0 * at(-1) + 6.0 * at(-2) - at(-3)) / (12.0 * h);
}

} // namespace shocksim
