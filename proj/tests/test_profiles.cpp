#include "doctest.h"

#include <cmath>

#include "shocksim/profiles.hpp"
#include "shocksim/quasi_random.hpp"
#include "oracles.hpp"

using namespace shocksim;
using namespace shocksim::profiles;

TEST_CASE("w1d: pinned values and oddness") {
    CHECK(w1d(0.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(w1d(2.0) == doctest::Approx(-1.0).epsilon(1e-12));   // root of W^3+W+2
    CHECK(w1d(-2.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (double y : {0.3, 1.7, 42.0, 3e5}) CHECK(w1d(-y) == doctest::Approx(-w1d(y)));
}

TEST_CASE("w1d: cubic identity over twelve decades") {
    for (int i = 0; i < 4000; ++i) {
        const double t = -6.0 + 12.0 * halton(static_cast<std::uint64_t>(i) + 1, 2);
        const double y = std::pow(10.0, t) * (i % 2 == 0 ? 1.0 : -1.0);
        const double w = w1d(y);
        CHECK(std::abs(w * w * w + w + y) <= 1e-10 * (1.0 + std::abs(y)));
    }
}

TEST_CASE("bar_w: closed-form values") {
    CHECK(bar_w({0, 0, 0}) == doctest::Approx(0.0).epsilon(1e-14));
    for (double y1 : {0.4, -2.5, 11.0})
        CHECK(bar_w({y1, 0, 0}) == doctest::Approx(w1d(y1)).epsilon(1e-14));
    // B = 1/2 at |y_check| = 1, so sqrt(2) w1d(2) = -sqrt(2)
    CHECK(bar_w({4.0 * std::sqrt(2.0), 1.0, 0.0}) ==
          doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("bar_w_jet: origin jet matches the power series") {
    const ProfilePoint j = bar_w_jet({0, 0, 0}, 3);
    CHECK(j.grad.x1 == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(std::abs(j.grad.x2) < 1e-14);
    CHECK(std::abs(j.grad.x3) < 1e-14);
    CHECK(j.hess.max_abs() < 1e-14);
    CHECK(j.hess_d1(0, 0) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(j.hess_d1(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(j.hess_d1(2, 2) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(j.hess_d1(0, 1)) < 1e-12);
    CHECK(std::abs(j.hess_d1(1, 2)) < 1e-12);
    // genericity: eigenvalues of the d1-Hessian at least 2
    const auto ev = sym3_eigenvalues(j.hess_d1);
    CHECK(ev[0] >= 2.0 - 1e-6);
}

TEST_CASE("bar_w_jet: analytic derivatives against centered differences") {
    const double h = 1e-3;
    int idx = 0;
    for (const Vec3 base :
         {Vec3{0.7, -0.3, 1.1}, Vec3{-2.2, 0.9, 0.4}, Vec3{5.5, -1.7, 2.3},
          Vec3{0.05, 0.02, -0.01}}) {
        ++idx;
        const ProfilePoint j = bar_w_jet(base, 3);
        auto call = [](const Vec3& p) { return bar_w(p); };
        for (int a = 0; a < 3; ++a) {
            const double fd = oracles::fd1(call, base, a, h);
            CHECK(std::abs(j.grad[a] - fd) <= 1e-6 * (1.0 + std::abs(fd)));
        }
        // d1-Hessian rows against differences of the analytic gradient
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b) {
                auto g1 = [&](const Vec3& p) { return bar_w_jet(p, 2).hess(0, b); };
                const double fd = oracles::fd1(g1, base, a, h);
                CHECK(std::abs(j.hess_d1(a, b) - fd) <= 1e-6 * (1.0 + std::abs(fd)));
            }
    }
    CHECK(idx == 4);
}

TEST_CASE("weights: exact polynomial evaluation") {
    Weights w = weights({0, 0, 0});
    CHECK(w.eta == 1.0);
    CHECK(w.tilde_eta == 1.0);
    w = weights({1, 0, 0});
    CHECK(w.eta == 2.0);
    CHECK(w.tilde_eta == 2.0);
    w = weights({0, 1, 1});
    CHECK(w.eta == 9.0);
    CHECK(w.tilde_eta == 11.0);
    for (int i = 0; i < 100; ++i) {
        const Vec3 y = halton_cube(static_cast<std::uint64_t>(i), 5.0);
        const Weights ww = weights(y);
        CHECK(ww.tilde_eta >= ww.eta);
        CHECK(ww.eta >= 1.0);
    }
}

TEST_CASE("ss_burgers_residual: stationarity and a linear probe") {
    CHECK(std::abs(ss_burgers_residual({0, 0, 0})) < 1e-14);
    CHECK(std::abs(ss_burgers_residual({0.7, -0.3, 1.1})) <= 1e-8);
    const Vec3 q{0.7, -0.3, 1.1};
    const double lin = ss_burgers_residual(
        [](const Vec3& y, double& v, Vec3& g) {
            v = y.x1;
            g = {1, 0, 0};
        },
        q);
    CHECK(lin == doctest::Approx(2.0 * q.x1).epsilon(1e-14));
}

TEST_CASE("weighted sup-norm properties of the profile") {
    double sup_w = 0, sup_d1 = 0, sup_cd = 0, sup_d1g = 0, sup_cc = 0;
    double min_d1 = 0, max_d1 = -1;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const Vec3 y = halton_cube(static_cast<std::uint64_t>(i), 1000.0);
        const ProfilePoint j = bar_w_jet(y, 3);
        const Weights w = weights(y );
        sup_w = std::max(sup_w, std::abs(j.value) * std::pow(w.eta, -1.0 / 6.0));
        sup_d1 = std::max(sup_d1, std::abs(j.grad.x1) * std::pow(w.tilde_eta, 1.0 / 3.0));
        sup_cd = std::max(sup_cd, std::hypot(j.grad.x2, j.grad.x3));
        min_d1 = std::min(min_d1, j.grad.x1);
        max_d1 = std::max(max_d1, j.grad.x1);
        double d1g = 0, cc = 0;
        for (int b = 0; b < 3; ++b) d1g = std::max(d1g, std::abs(j.hess_d1(0, b)));
        // hess_d1's first row is the gradient of d1W only at order 3; use
        // the second-derivative matrix for the remaining weights
        for (int a = 1; a < 3; ++a)
            for (int b = a; b < 3; ++b) cc = std::max(cc, std::abs(j.hess(a, b)));
        sup_d1g = std::max(sup_d1g, std::pow(w.eta, 1.0 / 3.0) *
                                        std::max({std::abs(j.hess(0, 0)),
                                                  std::abs(j.hess(0, 1)),
                                                  std::abs(j.hess(0, 2))}));
        sup_cc = std::max(sup_cc, std::pow(w.eta, 1.0 / 6.0) * cc);
    }
    CHECK(sup_w <= 1.0 + 1e-12);
    CHECK(sup_d1 <= 1.0 + 1e-12);
    CHECK(sup_cd <= 2.0 / 3.0 + 1e-12);
    CHECK(sup_d1g <= 0.75 + 1e-12);
    CHECK(sup_cc <= 0.75 + 1e-12);
    CHECK(min_d1 >= -1.0 - 1e-12);
    CHECK(max_d1 <= 0.0 + 1e-12);
    // record the measured transverse-gradient supremum (text bound is 3/5,
    // tabulated bound is 2/3)
    MESSAGE("measured sup |check-grad bar_w| = ", sup_cd);
}
