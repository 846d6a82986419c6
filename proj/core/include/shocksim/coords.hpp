#pragma once

#include "shocksim/vec.hpp"

namespace shocksim::coords {

/// Sound-speed exponent parameters: beta1 = 1/(1+alpha),
/// beta2 = (1-alpha)/(1+alpha), beta3 = alpha/(1+alpha].
struct Betas {
    double b1 = 0.5, b2 = 0.0, b3 = 0.5;

    static Betas from_alpha(double alpha) {
        return {1.0 / (1.0 + alpha), (1.0 - alpha) / (1.0 + alpha), alpha / (1.0 + alpha)};
    }
};

/// Rotation taking e1 to the unit vector (sqrt(1-|n|^2), n2, n3), together
/// with the generator matrices Q^(2), Q^(3) of its time derivative.
struct Rotation {
    Vec2 n_check;
    Mat3 R;
    Mat3 Q2, Q3;

    Mat3 q_dot(const Vec2& n_dot) const {
        return Q2 * n_dot.x2 + Q3 * n_dot.x3;
    }
};

/// Throws NearPoleRotation when |n_check|^2 >= 1 - 1e-12.
Rotation rotation_from_n(const Vec2& n_check);

/// Orthonormal frame adapted to the quadratic front x1 = f(x_check).
struct Frame {
    Vec3 N, T2, T3;
    double J = 1.0;
    double f = 0.0;
    Vec2 grad_f;
};

Frame frame_at(const Sym2& phi, const Vec2& x_check);

/// Spatial x_check-derivatives of the frame fields at a point; used by the
/// forcing assembly. d*[mu] is the derivative in direction x_{mu+2}.
struct FrameDerivs {
    Vec3 dN[2];
    Vec3 dT2[2];
    Vec3 dT3[2];
    double dJ[2] = {0.0, 0.0};
};

FrameDerivs frame_derivs(const Sym2& phi, const Vec2& x_check);

/// Time derivatives of N, T2, T3 induced by phi_dot at fixed x_check.
struct FrameRates {
    Vec3 N_dot, T2_dot, T3_dot;
};

FrameRates frame_rates(const Sym2& phi, const Sym2& phi_dot, const Vec2& x_check);

enum class Direction { Forward, Inverse };

/// x1 = xt1 - f(x_check), transverse coordinates unchanged.
Vec3 sheep_shear(const Vec3& x_tilde, const Sym2& phi, Direction dir);

struct SSCoords {
    double s = 0.0;
    Vec3 y;
    double tau = 0.0;
    double t = 0.0;
};

/// Self-similar map y = (x1 e^{3s/2}, x_check e^{s/2}), s = -log(tau - t).
/// Throws PastBlowup for tau <= t.
SSCoords to_self_similar(const Vec3& x, double t, double tau);
Vec3 from_self_similar(double s, const Vec3& y);

struct RiemannVars {
    double w = 0.0, z = 0.0;
    Vec2 a;
};

RiemannVars riemann_encode(const Vec3& u, double sigma, const Frame& fr);
void riemann_decode(const RiemannVars& r, const Frame& fr, Vec3& u, double& sigma);

/// Self-similar amplitude ansatz: W = e^{s/2}(w - kappa), Z = z, A = a.
struct SSVars {
    double W = 0.0, Z = 0.0;
    Vec2 A;
};

SSVars ss_ansatz_forward(const RiemannVars& r, double s, double kappa);
RiemannVars ss_ansatz_inverse(const SSVars& v, double s, double kappa);

/// (U, S) view: U.N = (kappa + e^{-s/2}W + Z)/2, S = (kappa + e^{-s/2}W - Z)/2.
struct USView {
    Vec3 U;
    double S = 0.0;
    double U_dot_N = 0.0;
};

USView us_view(const SSVars& v, double kappa, double s, const Frame& fr);

} // namespace shocksim::coords
