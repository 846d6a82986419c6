#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace shocksim {

struct Vec2 {
    double x2 = 0.0, x3 = 0.0;

    double& operator[](int i) { return i == 0 ? x2 : x3; }
    double operator[](int i) const { return i == 0 ? x2 : x3; }

    Vec2 operator+(const Vec2& o) const { return {x2 + o.x2, x3 + o.x3}; }
    Vec2 operator-(const Vec2& o) const { return {x2 - o.x2, x3 - o.x3}; }
    Vec2 operator*(double c) const { return {c * x2, c * x3}; }
    double dot(const Vec2& o) const { return x2 * o.x2 + x3 * o.x3; }
    double norm2() const { return x2 * x2 + x3 * x3; }
    double norm() const { return std::sqrt(norm2()); }
};

struct Vec3 {
    double x1 = 0.0, x2 = 0.0, x3 = 0.0;

    double& operator[](int i) { return i == 0 ? x1 : (i == 1 ? x2 : x3); }
    double operator[](int i) const { return i == 0 ? x1 : (i == 1 ? x2 : x3); }

    Vec2 check() const { return {x2, x3}; }

    Vec3 operator+(const Vec3& o) const { return {x1 + o.x1, x2 + o.x2, x3 + o.x3}; }
    Vec3 operator-(const Vec3& o) const { return {x1 - o.x1, x2 - o.x2, x3 - o.x3}; }
    Vec3 operator*(double c) const { return {c * x1, c * x2, c * x3}; }
    Vec3 operator-() const { return {-x1, -x2, -x3}; }

    double dot(const Vec3& o) const { return x1 * o.x1 + x2 * o.x2 + x3 * o.x3; }
    Vec3 cross(const Vec3& o) const {
        return {x2 * o.x3 - x3 * o.x2, x3 * o.x1 - x1 * o.x3, x1 * o.x2 - x2 * o.x1};
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
    double norm_inf() const {
        return std::max(std::abs(x1), std::max(std::abs(x2), std::abs(x3)));
    }
};

inline Vec3 operator*(double c, const Vec3& v) { return v * c; }
inline Vec2 operator*(double c, const Vec2& v) { return v * c; }

/// Dense 3x3 matrix, row-major.
struct Mat3 {
    std::array<double, 9> a{};  // a[3*i + j]

    static Mat3 identity() {
        Mat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(3 * i + j)]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(3 * i + j)]; }

    Vec3 col(int j) const { return {(*this)(0, j), (*this)(1, j), (*this)(2, j)}; }
    Vec3 row(int i) const { return {(*this)(i, 0), (*this)(i, 1), (*this)(i, 2)}; }

    Vec3 operator*(const Vec3& v) const {
        return {row(0).dot(v), row(1).dot(v), row(2).dot(v)};
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }
    Mat3 operator+(const Mat3& o) const {
        Mat3 r;
        for (std::size_t i = 0; i < 9; ++i) r.a[i] = a[i] + o.a[i];
        return r;
    }
    Mat3 operator-(const Mat3& o) const {
        Mat3 r;
        for (std::size_t i = 0; i < 9; ++i) r.a[i] = a[i] - o.a[i];
        return r;
    }
    Mat3 operator*(double c) const {
        Mat3 r;
        for (std::size_t i = 0; i < 9; ++i) r.a[i] = c * a[i];
        return r;
    }
    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
        return r;
    }

    double det() const {
        return (*this)(0, 0) * ((*this)(1, 1) * (*this)(2, 2) - (*this)(1, 2) * (*this)(2, 1)) -
               (*this)(0, 1) * ((*this)(1, 0) * (*this)(2, 2) - (*this)(1, 2) * (*this)(2, 0)) +
               (*this)(0, 2) * ((*this)(1, 0) * (*this)(2, 1) - (*this)(1, 1) * (*this)(2, 0));
    }

    Mat3 inverse() const {
        const Mat3& m = *this;
        Mat3 r;
        r(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
        r(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
        r(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
        r(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
        r(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
        r(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
        r(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
        r(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
        r(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        const double d = det();
        return r * (1.0 / d);
    }

    double norm_inf() const {  // max absolute row sum
        double m = 0.0;
        for (int i = 0; i < 3; ++i) {
            double s = 0.0;
            for (int j = 0; j < 3; ++j) s += std::abs((*this)(i, j));
            m = std::max(m, s);
        }
        return m;
    }
    double max_abs() const {
        double m = 0.0;
        for (double v : a) m = std::max(m, std::abs(v));
        return m;
    }
};

/// Symmetric 2x2 matrix acting on the transverse (x2,x3) plane.
struct Sym2 {
    double a22 = 0.0, a23 = 0.0, a33 = 0.0;

    double operator()(int nu, int ga) const {
        // nu, ga in {0,1} addressing components 2,3
        if (nu == 0 && ga == 0) return a22;
        if (nu == 1 && ga == 1) return a33;
        return a23;
    }
    Vec2 operator*(const Vec2& v) const {
        return {a22 * v.x2 + a23 * v.x3, a23 * v.x2 + a33 * v.x3};
    }
    Sym2 operator+(const Sym2& o) const { return {a22 + o.a22, a23 + o.a23, a33 + o.a33}; }
    Sym2 operator-(const Sym2& o) const { return {a22 - o.a22, a23 - o.a23, a33 - o.a33}; }
    Sym2 operator*(double c) const { return {c * a22, c * a23, c * a33}; }
    double max_abs() const {
        return std::max(std::abs(a22), std::max(std::abs(a23), std::abs(a33)));
    }
    double trace() const { return a22 + a33; }
    /// phi^2 as a symmetric 2x2 product.
    Sym2 squared() const {
        return {a22 * a22 + a23 * a23, a23 * (a22 + a33), a23 * a23 + a33 * a33};
    }
};

/// Symmetric 3x3 matrix (e.g. Hessians).
struct Sym3 {
    // order: (1,1),(1,2),(1,3),(2,2),(2,3),(3,3)
    std::array<double, 6> a{};

    static int idx(int i, int j) {
        if (i > j) std::swap(i, j);
        static constexpr int lut[3][3] = {{0, 1, 2}, {-1, 3, 4}, {-1, -1, 5}};
        return lut[i][j];
    }
    double& operator()(int i, int j) { return a[static_cast<std::size_t>(idx(i, j))]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(idx(i, j))]; }

    Mat3 full() const {
        Mat3 m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = (*this)(i, j);
        return m;
    }
    double max_abs() const {
        double m = 0.0;
        for (double v : a) m = std::max(m, std::abs(v));
        return m;
    }
};

/// Symmetric rank-3 tensor of third derivatives; 10 independent entries.
struct Sym3Tensor {
    // lexicographic over sorted index triples:
    // 111,112,113,122,123,133,222,223,233,333
    std::array<double, 10> a{};

    static int idx(int i, int j, int k) {
        int s[3] = {i, j, k};
        if (s[0] > s[1]) std::swap(s[0], s[1]);
        if (s[1] > s[2]) std::swap(s[1], s[2]);
        if (s[0] > s[1]) std::swap(s[0], s[1]);
        // map sorted triple to offset
        static constexpr int lut[3][3][3] = {
            {{0, 1, 2}, {-1, 3, 4}, {-1, -1, 5}},
            {{-1, -1, -1}, {-1, 6, 7}, {-1, -1, 8}},
            {{-1, -1, -1}, {-1, -1, -1}, {-1, -1, 9}}};
        return lut[s[0]][s[1]][s[2]];
    }
    double& operator()(int i, int j, int k) { return a[static_cast<std::size_t>(idx(i, j, k))]; }
    double operator()(int i, int j, int k) const {
        return a[static_cast<std::size_t>(idx(i, j, k))];
    }
    double max_abs() const {
        double m = 0.0;
        for (double v : a) m = std::max(m, std::abs(v));
        return m;
    }
};

/// Eigenvalues of a symmetric 3x3 matrix (ascending), via the standard
/// trigonometric closed form.
inline std::array<double, 3> sym3_eigenvalues(const Sym3& s) {
    const double p1 = s(0, 1) * s(0, 1) + s(0, 2) * s(0, 2) + s(1, 2) * s(1, 2);
    const double q = (s(0, 0) + s(1, 1) + s(2, 2)) / 3.0;
    if (p1 < 1e-300) {
        std::array<double, 3> ev{s(0, 0), s(1, 1), s(2, 2)};
        std::sort(ev.begin(), ev.end());
        return ev;
    }
    const double p2 = (s(0, 0) - q) * (s(0, 0) - q) + (s(1, 1) - q) * (s(1, 1) - q) +
                      (s(2, 2) - q) * (s(2, 2) - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Mat3 b = s.full();
    for (int i = 0; i < 3; ++i) b(i, i) -= q;
    b = b * (1.0 / p);
    double r = b.det() / 2.0;
    r = std::max(-1.0, std::min(1.0, r));
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    const double e2 = 3.0 * q - e1 - e3;
    std::array<double, 3> ev{e1, e2, e3};
    std::sort(ev.begin(), ev.end());
    return ev;
}

} // namespace shocksim
