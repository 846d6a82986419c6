#include "shocksim/profiles.hpp"

#include <cmath>
#include <ostream>
#include <vector>

#include "shocksim/textio.hpp"

namespace shocksim::profiles {

namespace {

// Cardano evaluation of the real root of w^3 + w + y = 0 for y >= 0.
// Writing S = sqrt(1/27 + y^2/4), the two radicands are a = S - y/2 and
// b = S + y/2 with a*b = 1/27 exactly, so a is recovered from b without
// the subtractive cancellation that ruins the textbook form for y >> 1.
double w1d_nonneg(double y) {
    if (y > 1e8) {
        // asymptotic branch: w = -y^{1/3}(1 - y^{-2/3}/3)
        const double c = std::cbrt(y);
        return -c * (1.0 - 1.0 / (3.0 * c * c));
    }
    const double S = std::sqrt(1.0 / 27.0 + 0.25 * y * y);
    const double b = S + 0.5 * y;
    const double a = 1.0 / (27.0 * b);
    return std::cbrt(a) - std::cbrt(b);
}

} // namespace

double w1d(double y1) {
    return y1 >= 0.0 ? w1d_nonneg(y1) : -w1d_nonneg(-y1);
}

void w1d_jet(double y1, double& w, double& dw, double& d2w, double& d3w) {
    w = w1d(y1);
    // implicit differentiation of w^3 + w + y = 0
    const double p = 1.0 + 3.0 * w * w;
    dw = -1.0 / p;
    d2w = 6.0 * w * dw / (p * p);
    d3w = 6.0 * dw * dw / (p * p) + 6.0 * w * d2w / (p * p) -
          72.0 * w * w * dw * dw / (p * p * p);
}

double bar_w(const Vec3& y) {
    const double B = 1.0 / (1.0 + y.check().norm2());
    return w1d(std::pow(B, 1.5) * y.x1) / std::sqrt(B);
}

ProfilePoint bar_w_jet(const Vec3& y, int order) {
    ProfilePoint out;
    out.y = y;

    const double b = 1.0 / (1.0 + y.check().norm2());
    const double sb = std::sqrt(b);
    const double q = b * sb * y.x1;  // B^{3/2} y1
    double u, du, d2u, d3u;
    w1d_jet(q, u, du, d2u, d3u);

    out.value = u / sb;
    if (order < 1) return out;

    // F(y1, b) = b^{-1/2} u(b^{3/2} y1); partials in (y1, b):
    const double F1 = b * du;
    const double Fb = -0.5 * u / (b * sb) + 1.5 * y.x1 * du;
    // b(y_check) derivatives
    const double b2 = b * b, b3 = b2 * b, b4 = b3 * b;
    const Vec2 db{-2.0 * y.x2 * b2, -2.0 * y.x3 * b2};
    auto d2b = [&](int nu, int mu) {
        const double ynu = nu == 0 ? y.x2 : y.x3;
        const double ymu = mu == 0 ? y.x2 : y.x3;
        return (nu == mu ? -2.0 * b2 : 0.0) + 8.0 * ynu * ymu * b3;
    };
    out.grad.x1 = F1;
    out.grad.x2 = Fb * db.x2;
    out.grad.x3 = Fb * db.x3;
    if (order < 2) return out;

    const double F11 = b2 * sb * d2u;
    const double F1b = du + 1.5 * b * sb * y.x1 * d2u;
    const double Fbb =
        0.75 * u / (b2 * sb) - 0.75 * y.x1 * du / b + 2.25 * sb * y.x1 * y.x1 * d2u;

    out.hess(0, 0) = F11;
    for (int nu = 0; nu < 2; ++nu) out.hess(0, nu + 1) = F1b * db[nu];
    for (int nu = 0; nu < 2; ++nu)
        for (int mu = nu; mu < 2; ++mu)
            out.hess(nu + 1, mu + 1) = Fbb * db[nu] * db[mu] + Fb * d2b(nu, mu);
    if (order < 3) return out;

    const double F111 = b4 * d3u;
    const double F11b = 2.5 * b * sb * d2u + 1.5 * b3 * y.x1 * d3u;
    const double F1bb = 3.75 * sb * y.x1 * d2u + 2.25 * b2 * y.x1 * y.x1 * d3u;

    out.hess_d1(0, 0) = F111;
    for (int nu = 0; nu < 2; ++nu) out.hess_d1(0, nu + 1) = F11b * db[nu];
    for (int nu = 0; nu < 2; ++nu)
        for (int mu = nu; mu < 2; ++mu)
            out.hess_d1(nu + 1, mu + 1) = F1bb * db[nu] * db[mu] + F1b * d2b(nu, mu);
    return out;
}

Weights weights(const Vec3& y) {
    const double c2 = y.check().norm2();
    Weights w;
    w.eta = 1.0 + y.x1 * y.x1 + c2 * c2 * c2;
    w.tilde_eta = w.eta + c2;
    return w;
}

double ss_burgers_residual(const JetFn& profile, const Vec3& y) {
    double value = 0.0;
    Vec3 grad;
    profile(y, value, grad);
    return -0.5 * value + (1.5 * y.x1 + value) * grad.x1 + 0.5 * y.x2 * grad.x2 +
           0.5 * y.x3 * grad.x3;
}

double ss_burgers_residual(const Vec3& y) {
    return ss_burgers_residual(
        [](const Vec3& p, double& v, Vec3& g) {
            const ProfilePoint pp = bar_w_jet(p, 1);
            v = pp.value;
            g = pp.grad;
        },
        y);
}

void export_profile_table(std::ostream& os, const std::vector<double>& axis1,
                          const std::vector<double>& axis2, const std::vector<double>& axis3) {
    os << "y1,y2,y3,W,dW1,dW2,dW3\n";
    for (double y1 : axis1)
        for (double y2 : axis2)
            for (double y3 : axis3) {
                const ProfilePoint p = bar_w_jet({y1, y2, y3}, 1);
                os << fmt_g17(y1) << ',' << fmt_g17(y2) << ',' << fmt_g17(y3) << ','
                   << fmt_g17(p.value) << ',' << fmt_g17(p.grad.x1) << ','
                   << fmt_g17(p.grad.x2) << ',' << fmt_g17(p.grad.x3) << '\n';
            }
}

} // namespace shocksim::profiles
