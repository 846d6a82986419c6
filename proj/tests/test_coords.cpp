#include "doctest.h"

#include <cmath>
#include <random>

#include "shocksim/coords.hpp"
#include "shocksim/errors.hpp"

using namespace shocksim;
using namespace shocksim::coords;

TEST_CASE("rotation_from_n: orthogonality, determinant, first column") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (int i = 0; i < 200; ++i) {
        const Vec2 nc{u(rng), u(rng)};
        const Rotation r = rotation_from_n(nc);
        const Mat3 rtr = r.R.transposed() * r.R;
        CHECK((rtr - Mat3::identity()).max_abs() <= 1e-12);
        CHECK(r.R.det() == doctest::Approx(1.0).epsilon(1e-12));
        const Vec3 col = r.R.col(0);
        CHECK(col.x1 == doctest::Approx(std::sqrt(1.0 - nc.norm2())).epsilon(1e-13));
        CHECK(col.x2 == doctest::Approx(nc.x2).epsilon(1e-13));
        CHECK(col.x3 == doctest::Approx(nc.x3).epsilon(1e-13));
        // generators stay skew-symmetric
        for (const Mat3* q : {&r.Q2, &r.Q3})
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    CHECK(std::abs((*q)(a, b) + (*q)(b, a)) <= 1e-14);
    }
    // zero rotation: identity and the small-angle generator limits
    const Rotation r0 = rotation_from_n({0, 0});
    CHECK((r0.R - Mat3::identity()).max_abs() == 0.0);
    CHECK(r0.Q2(0, 1) == doctest::Approx(1.0));
    CHECK(r0.Q2(1, 0) == doctest::Approx(-1.0));
    CHECK(std::abs(r0.Q2(0, 2)) < 1e-15);
    CHECK(std::abs(r0.Q2(1, 2)) < 1e-15);
    CHECK(r0.Q3(0, 2) == doctest::Approx(1.0));
    CHECK(std::abs(r0.Q3(1, 2)) < 1e-15);
    // Q = dR^T R consistency by finite differences in n
    {
        const Vec2 nc{0.12, -0.07};
        const double h = 1e-6;
        const Rotation rc = rotation_from_n(nc);
        const Mat3 rp = rotation_from_n({nc.x2 + h, nc.x3}).R;
        const Mat3 rm = rotation_from_n({nc.x2 - h, nc.x3}).R;
        Mat3 dr;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) dr(a, b) = (rp(a, b) - rm(a, b)) / (2 * h);
        const Mat3 q2_fd = dr.transposed() * rc.R;
        CHECK((q2_fd - rc.Q2).max_abs() <= 1e-8);
    }
    CHECK_THROWS_AS(rotation_from_n({0.8, 0.7}), NearPoleRotation);
}

TEST_CASE("frame_at: flat front and quadratic graph") {
    const Frame flat = frame_at({}, {3.0, -4.0});
    CHECK(flat.N.x1 == 1.0);
    CHECK(flat.T2.x2 == 1.0);
    CHECK(flat.T3.x3 == 1.0);
    CHECK(flat.J == 1.0);
    CHECK(flat.f == 0.0);

    const double c = 0.3, a = 1.2, b = -0.7;
    const Frame fr = frame_at({c, 0.0, c}, {a, b});
    CHECK(fr.grad_f.x2 == doctest::Approx(c * a));
    CHECK(fr.grad_f.x3 == doctest::Approx(c * b));
    CHECK(fr.J == doctest::Approx(std::sqrt(1.0 + c * c * (a * a + b * b))));
}

TEST_CASE("frame_at: orthonormality and handedness over random inputs") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> up(-1.0, 1.0);
    std::uniform_real_distribution<double> ux(-10.0, 10.0);
    for (int i = 0; i < 10000; ++i) {
        const Sym2 phi{up(rng), up(rng), up(rng)};
        const Vec2 xc{ux(rng), ux(rng)};
        const Frame fr = frame_at(phi, xc);
        CHECK(std::abs(fr.N.norm() - 1.0) <= 1e-12);
        CHECK(std::abs(fr.T2.norm() - 1.0) <= 1e-12);
        CHECK(std::abs(fr.T3.norm() - 1.0) <= 1e-12);
        CHECK(std::abs(fr.N.dot(fr.T2)) <= 1e-12);
        CHECK(std::abs(fr.N.dot(fr.T3)) <= 1e-12);
        CHECK(std::abs(fr.T2.dot(fr.T3)) <= 1e-12);
        CHECK((fr.N.cross(fr.T2) - fr.T3).norm() <= 1e-12);
        CHECK((fr.N.cross(fr.T3) + fr.T2).norm() <= 1e-12);
    }
}

TEST_CASE("frame derivatives and rates agree with finite differences") {
    const Sym2 phi{0.4, -0.2, 0.25};
    const Sym2 phid{0.8, 0.3, -0.5};
    const Vec2 xc{1.3, -0.6};
    const FrameDerivs d = frame_derivs(phi, xc);
    const double h = 1e-6;
    for (int mu = 0; mu < 2; ++mu) {
        Vec2 p = xc, m = xc;
        (mu == 0 ? p.x2 : p.x3) += h;
        (mu == 0 ? m.x2 : m.x3) -= h;
        const Frame fp = frame_at(phi, p), fm = frame_at(phi, m);
        for (int i = 0; i < 3; ++i) {
            CHECK(d.dN[mu][i] == doctest::Approx((fp.N[i] - fm.N[i]) / (2 * h)).epsilon(1e-6));
            CHECK(d.dT2[mu][i] ==
                  doctest::Approx((fp.T2[i] - fm.T2[i]) / (2 * h)).epsilon(1e-6));
            CHECK(d.dT3[mu][i] ==
                  doctest::Approx((fp.T3[i] - fm.T3[i]) / (2 * h)).epsilon(1e-6));
        }
        CHECK(d.dJ[mu] == doctest::Approx((fp.J - fm.J) / (2 * h)).epsilon(1e-6));
    }
    const FrameRates r = frame_rates(phi, phid, xc);
    const double ht = 1e-6;
    const Frame ftp = frame_at(phi + phid * ht, xc);
    const Frame ftm = frame_at(phi + phid * (-ht), xc);
    for (int i = 0; i < 3; ++i) {
        CHECK(r.N_dot[i] == doctest::Approx((ftp.N[i] - ftm.N[i]) / (2 * ht)).epsilon(1e-6));
        CHECK(r.T2_dot[i] ==
              doctest::Approx((ftp.T2[i] - ftm.T2[i]) / (2 * ht)).epsilon(1e-6));
        CHECK(r.T3_dot[i] ==
              doctest::Approx((ftp.T3[i] - ftm.T3[i]) / (2 * ht)).epsilon(1e-6));
    }
}

TEST_CASE("sheep_shear: definition and exact round trip") {
    const Sym2 zero{};
    const Vec3 x{0.3, -1.0, 2.0};
    const Vec3 same = sheep_shear(x, zero, Direction::Forward);
    CHECK((same - x).norm() == 0.0);

    const double eps = 1e-3;
    const Sym2 phi{2.0 * eps, 0.0, 0.0};
    const Vec3 sheared = sheep_shear({1.0, 1.0, 0.0}, phi, Direction::Forward);
    CHECK(sheared.x1 == doctest::Approx(1.0 - eps).epsilon(1e-14));
    CHECK(sheared.x2 == 1.0);

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const Sym2 p{u(rng), u(rng), u(rng)};
        const Vec3 xi{u(rng), u(rng), u(rng)};
        const Vec3 rt = sheep_shear(sheep_shear(xi, p, Direction::Forward), p,
                                    Direction::Inverse);
        CHECK((rt - xi).norm_inf() <= 1e-15 * (1.0 + xi.norm_inf()));
    }
}

TEST_CASE("self-similar map: scalings, inverse, blow-up gate") {
    const double eps = 1e-2;
    const SSCoords c = to_self_similar({0, 0, 0}, -eps, 0.0);
    CHECK(c.s == doctest::Approx(-std::log(eps)).epsilon(1e-14));

    const double e32 = std::pow(eps, 1.5), e12 = std::sqrt(eps);
    const SSCoords c2 = to_self_similar({e32, e12, 0}, -eps, 0.0);
    CHECK(c2.y.x1 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(c2.y.x2 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(c2.y.x3 == doctest::Approx(0.0));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 x{u(rng), u(rng), u(rng)};
        const double t = -0.3 * std::abs(u(rng)) - 1e-4, tau = 0.1 * u(rng);
        if (tau <= t) continue;
        const SSCoords ss = to_self_similar(x, t, tau);
        const Vec3 back = from_self_similar(ss.s, ss.y);
        CHECK((back - x).norm_inf() <= 1e-14 * (1.0 + x.norm_inf()));
    }
    CHECK_THROWS_AS(to_self_similar({1, 0, 0}, 0.0, 0.0), PastBlowup);
}

TEST_CASE("riemann encode/decode and the self-similar amplitude ansatz") {
    const Frame flat = frame_at({}, {0, 0});
    const RiemannVars r = riemann_encode(flat.N, 0.0, flat);
    CHECK(r.w == doctest::Approx(1.0));
    CHECK(r.z == doctest::Approx(1.0));
    CHECK(std::abs(r.a.x2) < 1e-15);

    const double kappa = 7.0;
    const RiemannVars cs = riemann_encode(flat.N * (kappa / 2.0), kappa / 2.0, flat);
    CHECK(cs.w == doctest::Approx(kappa));
    CHECK(std::abs(cs.z) < 1e-13);

    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const Sym2 phi{0.3 * u(rng), 0.3 * u(rng), 0.3 * u(rng)};
        const Frame fr = frame_at(phi, {u(rng), u(rng)});
        const Vec3 uu{u(rng), u(rng), u(rng)};
        const double sg = u(rng);
        const RiemannVars rv = riemann_encode(uu, sg, fr);
        Vec3 ub;
        double sb;
        riemann_decode(rv, fr, ub, sb);
        CHECK((ub - uu).norm_inf() <= 1e-14 * (1.0 + uu.norm_inf()));
        CHECK(std::abs(sb - sg) <= 1e-14 * (1.0 + std::abs(sg)));

        const double s = 3.0 + u(rng);
        const SSVars v = ss_ansatz_forward(rv, s, kappa);
        const RiemannVars back = ss_ansatz_inverse(v, s, kappa);
        CHECK(std::abs(back.w - rv.w) <= 1e-13 * (1.0 + std::abs(rv.w)));
        CHECK(back.z == rv.z);

        // w at the modulation amplitude maps to W = 0
        const SSVars v0 = ss_ansatz_forward({kappa, rv.z, rv.a}, s, kappa);
        CHECK(std::abs(v0.W) <= 1e-9);
        const SSVars vm = ss_ansatz_forward({kappa - std::exp(-0.5 * s), rv.z, rv.a}, s,
                                            kappa);
        CHECK(vm.W == doctest::Approx(-1.0).epsilon(1e-9));

        // (U, S) view identities
        const USView us = us_view(v, kappa, s, fr);
        CHECK(us.S + us.U_dot_N ==
              doctest::Approx(kappa + std::exp(-0.5 * s) * v.W + v.Z).epsilon(1e-12));
    }

    // constant state: U.N = kappa/2 = S; Z = -kappa gives U.N = 0, S = kappa
    const SSVars zerov{0.0, 0.0, {0.0, 0.0}};
    const USView us0 = us_view(zerov, kappa, 5.0, flat);
    CHECK(us0.U_dot_N == doctest::Approx(kappa / 2));
    CHECK(us0.S == doctest::Approx(kappa / 2));
    const USView usz = us_view({0.0, -kappa, {0, 0}}, kappa, 5.0, flat);
    CHECK(std::abs(usz.U_dot_N) < 1e-14);
    CHECK(usz.S == doctest::Approx(kappa));
}

TEST_CASE("beta parameters: defining identities") {
    for (double alpha : {0.2, 0.5, 1.0, 1.7, 3.0}) {
        const Betas b = Betas::from_alpha(alpha);
        CHECK(b.b1 + b.b3 == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(b.b2 == doctest::Approx(b.b1 - b.b3).epsilon(1e-14));
        CHECK(b.b1 == doctest::Approx(1.0 / (1.0 + alpha)));
    }
}
