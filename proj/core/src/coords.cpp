#include "shocksim/coords.hpp"

#include <cmath>

#include "shocksim/errors.hpp"
#include "shocksim/textio.hpp"

namespace shocksim::coords {

Rotation rotation_from_n(const Vec2& nc) {
    const double nn = nc.norm2();
    if (nn >= 1.0 - 1e-12)
        throw NearPoleRotation("|n_check|^2 = " + fmt_g(nn, 6));
    const double n1 = std::sqrt(1.0 - nn);
    const double n2 = nc.x2, n3 = nc.x3;
    const double den = 1.0 + n1;

    Rotation rot;
    rot.n_check = nc;

    Mat3& R = rot.R;
    R(0, 0) = n1;
    R(0, 1) = -n2;
    R(0, 2) = -n3;
    R(1, 0) = n2;
    R(1, 1) = 1.0 - n2 * n2 / den;
    R(1, 2) = -n2 * n3 / den;
    R(2, 0) = n3;
    R(2, 1) = -n2 * n3 / den;
    R(2, 2) = 1.0 - n3 * n3 / den;

    const double g = n1 * den;  // n1 (1 + n1)
    Mat3& Q2 = rot.Q2;
    Q2(0, 1) = 1.0 + n2 * n2 / g;
    Q2(0, 2) = n2 * n3 / g;
    Q2(1, 2) = n3 / den;
    Q2(1, 0) = -Q2(0, 1);
    Q2(2, 0) = -Q2(0, 2);
    Q2(2, 1) = -Q2(1, 2);

    Mat3& Q3 = rot.Q3;
    Q3(0, 1) = n2 * n3 / g;
    Q3(0, 2) = 1.0 + n3 * n3 / g;
    Q3(1, 2) = -n2 / den;
    Q3(1, 0) = -Q3(0, 1);
    Q3(2, 0) = -Q3(0, 2);
    Q3(2, 1) = -Q3(1, 2);

    return rot;
}

Frame frame_at(const Sym2& phi, const Vec2& xc) {
    Frame fr;
    fr.grad_f = phi * xc;
    fr.f = 0.5 * xc.dot(fr.grad_f);
    const double p = fr.grad_f.x2, q = fr.grad_f.x3;
    fr.J = std::sqrt(1.0 + p * p + q * q);
    const double J = fr.J;
    const double D = J * (J + 1.0);
    fr.N = {1.0 / J, -p / J, -q / J};
    fr.T2 = {p / J, 1.0 - p * p / D, -p * q / D};
    fr.T3 = {q / J, -p * q / D, 1.0 - q * q / D};
    return fr;
}

FrameDerivs frame_derivs(const Sym2& phi, const Vec2& xc) {
    const Frame fr = frame_at(phi, xc);
    const double p = fr.grad_f.x2, q = fr.grad_f.x3;
    const double J = fr.J;
    const double D = J * (J + 1.0);

    FrameDerivs d;
    for (int mu = 0; mu < 2; ++mu) {
        const double pm = phi(0, mu);  // d p / d x_{mu+2}
        const double qm = phi(1, mu);  // d q / d x_{mu+2}
        const double Jm = (p * pm + q * qm) / J;
        const double Dm = Jm * (2.0 * J + 1.0);
        d.dJ[mu] = Jm;
        d.dN[mu] = {-Jm / (J * J), -pm / J + p * Jm / (J * J), -qm / J + q * Jm / (J * J)};
        d.dT2[mu] = {pm / J - p * Jm / (J * J),
                     -(2.0 * p * pm * D - p * p * Dm) / (D * D),
                     -((pm * q + p * qm) * D - p * q * Dm) / (D * D)};
        d.dT3[mu] = {qm / J - q * Jm / (J * J),
                     -((pm * q + p * qm) * D - p * q * Dm) / (D * D),
                     -(2.0 * q * qm * D - q * q * Dm) / (D * D)};
    }
    return d;
}

FrameRates frame_rates(const Sym2& phi, const Sym2& phi_dot, const Vec2& xc) {
    const Frame fr = frame_at(phi, xc);
    const double p = fr.grad_f.x2, q = fr.grad_f.x3;
    const Vec2 gd = phi_dot * xc;  // d/dt grad f at fixed x_check
    const double pd = gd.x2, qd = gd.x3;
    const double J = fr.J;
    const double Jd = (p * pd + q * qd) / J;
    const double D = J * (J + 1.0);
    const double Dd = Jd * (2.0 * J + 1.0);

    FrameRates r;
    r.N_dot = {-Jd / (J * J), -pd / J + p * Jd / (J * J), -qd / J + q * Jd / (J * J)};
    r.T2_dot = {pd / J - p * Jd / (J * J),
                -(2.0 * p * pd * D - p * p * Dd) / (D * D),
                -((pd * q + p * qd) * D - p * q * Dd) / (D * D)};
    r.T3_dot = {qd / J - q * Jd / (J * J),
                -((pd * q + p * qd) * D - p * q * Dd) / (D * D),
                -(2.0 * q * qd * D - q * q * Dd) / (D * D)};
    return r;
}

Vec3 sheep_shear(const Vec3& x_tilde, const Sym2& phi, Direction dir) {
    const Vec2 xc = x_tilde.check();
    const double f = 0.5 * xc.dot(phi * xc);
    if (dir == Direction::Forward) return {x_tilde.x1 - f, x_tilde.x2, x_tilde.x3};
    return {x_tilde.x1 + f, x_tilde.x2, x_tilde.x3};
}

SSCoords to_self_similar(const Vec3& x, double t, double tau) {
    if (!(tau > t))
        throw PastBlowup("tau - t = " + fmt_g(tau - t, 6) + " <= 0");
    SSCoords c;
    c.t = t;
    c.tau = tau;
    c.s = -std::log(tau - t);
    const double e_half = std::exp(0.5 * c.s);
    c.y = {x.x1 * e_half * e_half * e_half, x.x2 * e_half, x.x3 * e_half};
    return c;
}

Vec3 from_self_similar(double s, const Vec3& y) {
    const double e_half = std::exp(-0.5 * s);
    return {y.x1 * e_half * e_half * e_half, y.x2 * e_half, y.x3 * e_half};
}

RiemannVars riemann_encode(const Vec3& u, double sigma, const Frame& fr) {
    const double un = u.dot(fr.N);
    return {un + sigma, un - sigma, {u.dot(fr.T2), u.dot(fr.T3)}};
}

void riemann_decode(const RiemannVars& r, const Frame& fr, Vec3& u, double& sigma) {
    const double un = 0.5 * (r.w + r.z);
    sigma = 0.5 * (r.w - r.z);
    u = fr.N * un + fr.T2 * r.a.x2 + fr.T3 * r.a.x3;
}

SSVars ss_ansatz_forward(const RiemannVars& r, double s, double kappa) {
    return {std::exp(0.5 * s) * (r.w - kappa), r.z, r.a};
}

RiemannVars ss_ansatz_inverse(const SSVars& v, double s, double kappa) {
    return {std::exp(-0.5 * s) * v.W + kappa, v.Z, v.A};
}

USView us_view(const SSVars& v, double kappa, double s, const Frame& fr) {
    USView out;
    const double wphys = std::exp(-0.5 * s) * v.W + kappa;
    out.U_dot_N = 0.5 * (wphys + v.Z);
    out.S = 0.5 * (wphys - v.Z);
    out.U = fr.N * out.U_dot_N + fr.T2 * v.A.x2 + fr.T3 * v.A.x3;
    return out;
}

} // namespace shocksim::coords
