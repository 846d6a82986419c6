#pragma once

#include <cstddef>
#include <vector>

#include "shocksim/vec.hpp"

namespace shocksim {

/// Uniform anisotropic rectangular grid in self-similar coordinates.
/// Node counts are odd so y = 0 is a node; spacing = 2*extent/(n-1).
/// A degenerate axis (n == 1) pins that coordinate to zero (1D runs).
struct Grid3 {
    int n1 = 1, n2 = 1, n3 = 1;
    Vec3 extent;

    Grid3() = default;
    Grid3(int n1_, int n2_, int n3_, const Vec3& extent_);

    int n(int axis) const { return axis == 0 ? n1 : (axis == 1 ? n2 : n3); }
    double h(int axis) const { return spacing_[static_cast<std::size_t>(axis)]; }
    Vec3 spacing() const { return {spacing_[0], spacing_[1], spacing_[2]}; }

    std::size_t size() const {
        return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2) *
               static_cast<std::size_t>(n3);
    }
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * static_cast<std::size_t>(n2) +
                static_cast<std::size_t>(j)) *
                   static_cast<std::size_t>(n3) +
               static_cast<std::size_t>(k);
    }
    double coord(int axis, int i) const {
        const int nn = n(axis);
        if (nn == 1) return 0.0;
        return -extent[axis] + spacing_[static_cast<std::size_t>(axis)] * i;
    }
    Vec3 node(int i, int j, int k) const {
        return {coord(0, i), coord(1, j), coord(2, k)};
    }
    /// Index of the origin node (node counts are odd).
    void origin(int& i, int& j, int& k) const {
        i = (n1 - 1) / 2;
        j = (n2 - 1) / 2;
        k = (n3 - 1) / 2;
    }
    bool contains(const Vec3& y) const {
        return (n1 == 1 || std::abs(y.x1) <= extent.x1) &&
               (n2 == 1 || std::abs(y.x2) <= extent.x2) &&
               (n3 == 1 || std::abs(y.x3) <= extent.x3);
    }

private:
    std::array<double, 3> spacing_{0.0, 0.0, 0.0};
};

using Field = std::vector<double>;

/// Out-of-grid behavior when sampling a field.
enum class Extension {
    Zero,           // Z, A: compactly supported, zero beyond the grid
    ClampedLinear,  // W: linear extrapolation, |value| <= 2 eta^{1/6}(y)
    ClampEdge       // transport residuals: nearest-node continuation
};

/// Value at (possibly virtual) node indices, applying the extension.
double node_value(const Field& f, const Grid3& g, int i, int j, int k, Extension ext);

/// Tricubic (cubic Lagrange per axis) interpolation at y; degenerate axes
/// are skipped. Out-of-grid stencil entries come from the extension.
double sample(const Field& f, const Grid3& g, const Vec3& y, Extension ext);

/// 4th-order centered first derivative along `axis` at a node, shifting the
/// stencil near the boundary to stay one-sided 4th order.
double deriv1_4th(const Field& f, const Grid3& g, int axis, int i, int j, int k);

} // namespace shocksim
