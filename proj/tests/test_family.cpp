#include "doctest.h"

#include <cmath>
#include <sstream>

#include "shocksim/errors.hpp"
#include "shocksim/family.hpp"
#include "shocksim/profiles.hpp"
#include "shocksim/quasi_random.hpp"
#include "oracles.hpp"

using namespace shocksim;
using namespace shocksim::family;

TEST_CASE("taylor_coeffs: seed handling and order-5 values") {
    const CoeffTable t = taylor_coeffs(FamilySpec::bar_w_seed(), 9);
    CHECK(t.coeff({1, 0, 0}) == -1.0);
    CHECK(t.coeff({3, 0, 0}) == doctest::Approx(1.0));
    CHECK(t.coeff({1, 2, 0}) == doctest::Approx(1.0));
    CHECK(t.coeff({5, 0, 0}) == doctest::Approx(-3.0));
    CHECK(t.coeff({1, 4, 0}) == doctest::Approx(-1.0));
    CHECK(t.coeff({3, 2, 0}) == doctest::Approx(-4.0));
    CHECK(t.coeff({1, 2, 2}) == doctest::Approx(-2.0));
    // even orders vanish
    for (const MultiIndex& a : t.indices())
        if (a.order() % 2 == 0) CHECK(t.coeff(a) == 0.0);
    // y2 <-> y3 symmetry of the seed is inherited
    for (const MultiIndex& a : t.indices())
        CHECK(t.coeff(a) == doctest::Approx(t.coeff({a.a1, a.a3, a.a2})).epsilon(1e-14));
}

TEST_CASE("taylor_coeffs: rejects non-SPD seeds") {
    FamilySpec s;
    s.at({3, 0, 0}) = -6.0;  // negative (1,1)-entry of A_{1jk}
    s.at({1, 2, 0}) = 2.0;
    s.at({1, 0, 2}) = 2.0;
    CHECK_THROWS_AS(taylor_coeffs(s, 5), DegenerateFamily);
}

TEST_CASE("taylor_coeffs: matches the independent composition oracle to order 7") {
    const CoeffTable t = taylor_coeffs(FamilySpec::bar_w_seed(), 7);
    const auto oracle = oracles::bar_w_series(7);
    for (const auto& [key, val] : oracle) {
        const double mine = t.coeff({key[0], key[1], key[2]});
        CHECK(std::abs(mine - val) <= 1e-8 * std::max(1.0, std::abs(val)));
    }
    // loose FD cross-check of a third derivative of the closed form
    auto d3_111 = [&](double h) {
        auto f = [](double x) { return profiles::bar_w({x, 0, 0}); };
        return (f(-3 * h) / 8 - f(-2 * h) + 13 * f(-h) / 8 - 13 * f(h) / 8 + f(2 * h) -
                f(3 * h) / 8) /
               (h * h * h);
    };
    CHECK(d3_111(1e-2) == doctest::Approx(6.0 * t.coeff({3, 0, 0})).epsilon(1e-4));
}

TEST_CASE("eval_series: radius gate and closed-form agreement") {
    const CoeffTable t9 = taylor_coeffs(FamilySpec::bar_w_seed(), 9);
    CHECK(t9.eval({0, 0, 0}) == 0.0);
    const double r0 = t9.convergence_radius();
    CHECK(r0 == doctest::Approx(1.0 / (8.0 * 512.0)));
    // inside the certified radius the tail bound covers the truncation
    const Vec3 yin{0.5 * r0, 0, 0};
    const double tail = t9.tail_bound(yin);
    CHECK(std::abs(t9.eval(yin) - profiles::bar_w(yin)) <= tail + 1e-18);
    CHECK_THROWS_AS(t9.eval({2.0 * r0, 0.1 * r0, 0}), OutOfRadius);

    // partial sums track the closed form well beyond the certified radius
    const Vec3 y{0.05, 0.02, -0.01};
    CHECK(std::abs(t9.eval_unchecked(y) - profiles::bar_w(y)) <= 5e-12);
    const CoeffTable t11 = taylor_coeffs(FamilySpec::bar_w_seed(), 11);
    CHECK(std::abs(t11.eval_unchecked(y) - profiles::bar_w(y)) <= 1e-12);
}

TEST_CASE("series residual of the stationary equation decays with order") {
    for (int n : {7, 11, 15}) {
        const CoeffTable t = taylor_coeffs(FamilySpec::bar_w_seed(), n);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const Vec3 y = halton_cube(static_cast<std::uint64_t>(i),
                                       0.5 * t.convergence_radius() / std::sqrt(3.0));
            const double w = t.eval_unchecked(y);
            const Vec3 g = t.grad_unchecked(y);
            const double r = -0.5 * w + (1.5 * y.x1 + w) * g.x1 + 0.5 * y.x2 * g.x2 +
                             0.5 * y.x3 * g.x3;
            worst = std::max(worst, std::abs(r));
        }
        // remainder scale n^2 2^{-n} with measured constant K = 1
        CHECK(worst <= 1.0 * n * n * std::pow(2.0, -n));
    }
}

TEST_CASE("certify_catalan: inductive bound holds; violations detected") {
    const CoeffTable t = taylor_coeffs(FamilySpec::bar_w_seed(), 15);
    const CatalanReport rep = certify_catalan(t);
    CHECK(rep.worst <= 1.0);
    // order 3 is within bound by construction of D
    CHECK(rep.per_order_max[3] <= 1.0);

    // a randomized SPD seed certifies as well
    FamilySpec s;
    s.at({3, 0, 0}) = 9.0;
    s.at({1, 2, 0}) = 3.0;
    s.at({1, 0, 2}) = 1.0;
    s.at({1, 1, 1}) = 0.4;
    s.at({2, 1, 0}) = 0.7;
    s.at({0, 3, 0}) = 0.5;
    const CatalanReport rep2 = certify_catalan(taylor_coeffs(s, 11));
    CHECK(rep2.worst <= 1.0);

    // a corrupted table raises BoundViolated
    CoeffTable bad = taylor_coeffs(FamilySpec::bar_w_seed(), 7);
    bad.set_coeff({5, 0, 0}, 1e12);
    CHECK_THROWS_AS(certify_catalan(bad), BoundViolated);
}

TEST_CASE("extend_by_trajectory: closed-form agreement and consistency") {
    const CoeffTable t = taylor_coeffs(FamilySpec::bar_w_seed(), 15);
    for (const Vec3 y : {Vec3{5, 1, -2}, Vec3{50, 0, 0}, Vec3{-7, 2, 1}, Vec3{0.4, 0.1, 0}}) {
        const double v = extend_by_trajectory(t, y);
        CHECK(std::abs(v - profiles::bar_w(y)) <= 1e-6);
    }
    // on the shell the evaluation is the plain series
    const double delta = 0.5 * t.convergence_radius();
    const Vec3 on_shell{delta, 0, 0};
    CHECK(extend_by_trajectory(t, on_shell) ==
          doctest::Approx(t.eval_unchecked(on_shell)).epsilon(1e-12));

    // halving the integrator step moves the answer by < 1e-6
    TrajectoryOptions a, b;
    a.max_step = 0.2;
    b.max_step = 0.1;
    const Vec3 y{12, -1, 3};
    CHECK(std::abs(extend_by_trajectory(t, y, a) - extend_by_trajectory(t, y, b)) <= 1e-6);
}

TEST_CASE("largest_valid_shell: reports a usable shell") {
    const CoeffTable t = taylor_coeffs(FamilySpec::bar_w_seed(), 11);
    const double shell = largest_valid_shell(t);
    CHECK(shell > 0.0);
    CHECK(shell <= 0.5 * t.convergence_radius() + 1e-18);
    MESSAGE("largest valid shell = ", shell);
}

TEST_CASE("coefficient table serialization round-trips") {
    const CoeffTable t = taylor_coeffs(FamilySpec::bar_w_seed(), 7);
    std::stringstream ss;
    serialize(ss, t);
    const CoeffTable u = deserialize(ss);
    CHECK(u.max_order() == t.max_order());
    CHECK(u.growth_d() == t.growth_d());
    for (const MultiIndex& a : t.indices()) CHECK(u.coeff(a) == t.coeff(a));
}
