#include "doctest.h"

#include <cmath>
#include <random>

#include "shocksim/errors.hpp"
#include "shocksim/physical1d.hpp"
#include "shocksim/profiles.hpp"
#include "shocksim/solver.hpp"
#include "oracles.hpp"

using namespace shocksim;
using namespace shocksim::solver;

namespace {

ModulationState burgers_mod(double kappa0, double alpha) {
    ModulationState mod;
    mod.kappa = kappa0;
    mod.t = -0.01;
    mod.rates.xi_dot = {kappa0 / (2.0 * coords::Betas::from_alpha(alpha).b1), 0.0, 0.0};
    return mod;
}

FieldState profile_state(const Grid3& g, double s, bool with_za) {
    FieldState st(g, s, with_za);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            for (int k = 0; k < g.n3; ++k)
                st.W[g.index(i, j, k)] = profiles::bar_w(g.node(i, j, k));
    return st;
}

} // namespace

TEST_CASE("assemble_transport: Burgers reduction and drift at the origin") {
    const Grid3 g(33, 17, 17, {2, 1, 1});
    const FieldState st = profile_state(g, 4.6, false);
    const double alpha = 1.0;
    ModulationState mod = burgers_mod(20.0, alpha);
    const FrameTable frames = build_frames(g, st.s, mod);
    const TransportField t = assemble_transport(st, mod, alpha, frames);

    int oi, oj, ok;
    g.origin(oi, oj, ok);
    // with kappa and xi_dot balanced, g_W reduces to W pointwise
    for (int i = 0; i < g.n1; i += 4) {
        const std::size_t id = g.index(i, oj, ok);
        CHECK(t.gW[id] == doctest::Approx(st.W[id]).epsilon(1e-10));
    }
    // V at the origin is -R^T xi_dot
    CHECK(t.V1[g.index(oi, oj, ok)] == doctest::Approx(-20.0).epsilon(1e-12));
    CHECK(std::abs(t.V2[g.index(oi, oj, ok)]) < 1e-13);

    // all fields zero with kappa = 0, xi_dot = 0: residual velocities vanish
    FieldState zero_state(g, 4.6, true);
    ModulationState zmod;
    zmod.t = -0.01;
    const TransportField tz =
        assemble_transport(zero_state, zmod, alpha, build_frames(g, 4.6, zmod));
    for (std::size_t q = 0; q < g.size(); ++q) {
        CHECK(std::abs(tz.gW[q]) < 1e-12);
        CHECK(std::abs(tz.hW2[q]) < 1e-12);
    }
}

TEST_CASE("assemble_forcing: zero configurations and a hand-checked point") {
    const Grid3 g(33, 17, 17, {2, 1, 1});
    const double alpha = 1.0;
    const coords::Betas b = coords::Betas::from_alpha(alpha);

    // Z = A = 0 and flat frame: every forcing term vanishes
    FieldState st(g, 4.6, true);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            for (int k = 0; k < g.n3; ++k)
                st.W[g.index(i, j, k)] = profiles::bar_w(g.node(i, j, k));
    ModulationState mod = burgers_mod(20.0, alpha);
    const ForcingField f0 =
        assemble_forcing(st, mod, alpha, build_frames(g, st.s, mod));
    for (std::size_t q = 0; q < g.size(); ++q) {
        CHECK(std::abs(f0.FW[q]) < 1e-12);
        CHECK(std::abs(f0.FZ[q]) < 1e-12);
        CHECK(std::abs(f0.FA2[q]) < 1e-12);
    }

    // curved front, constant state: F_W = -2 b3 bt e^{-s/2} S (U.N) N_mu,mu
    ModulationState cmod;
    cmod.kappa = 4.0;
    cmod.t = -0.01;
    const double c = 0.013;
    cmod.phi = {c, 0.0, c};
    FieldState cst(g, 4.6, true);  // W = Z = A = 0 so S = U.N = kappa/2
    const FrameTable frames = build_frames(g, cst.s, cmod);
    const ForcingField fc = assemble_forcing(cst, cmod, alpha, frames);
    int oi, oj, ok;
    g.origin(oi, oj, ok);
    const std::size_t id = g.index(oi, oj, ok);
    const double S = 0.5 * cmod.kappa;
    const double Nmm = -(c + c);  // at the origin N_mu,mu = -phi_trace
    const double expect = -2.0 * b.b3 * 1.0 * std::exp(-0.5 * cst.s) * S * (S * Nmm);
    CHECK(fc.FW[id] == doctest::Approx(expect).epsilon(1e-12));
    // F_Z flips sign and carries one more e^{-s/2}
    CHECK(fc.FZ[id] ==
          doctest::Approx(-expect * std::exp(-0.5 * cst.s)).epsilon(1e-12));
}

TEST_CASE("step_ss: exact steady state, zero fields, error gates") {
    const Grid3 g(65, 33, 33, {2, 1, 1});
    const double alpha = 1.0;
    FieldState st = profile_state(g, 4.6, false);
    ModulationState mod = burgers_mod(20.0, alpha);
    const FrameTable frames = build_frames(g, st.s, mod);
    const TransportField tr = assemble_transport(st, mod, alpha, frames);
    StepOptions so;
    so.ds = 0.01;
    so.ds_max = 0.02;
    const FieldState next = step_ss(st, mod, alpha, frames, tr, nullptr, so);
    double drift = 0.0;
    for (int i = 2; i < g.n1 - 2; ++i)
        for (int j = 2; j < g.n2 - 2; ++j)
            for (int k = 2; k < g.n3 - 2; ++k)
                drift = std::max(drift,
                                 std::abs(next.W[g.index(i, j, k)] -
                                          profiles::bar_w(g.node(i, j, k))));
    // one-step drift bounded by interpolation + backtrack truncation
    CHECK(drift <= 1e-5);

    // zero fields stay zero without forcing
    FieldState z(g, 4.6, true);
    ModulationState zmod;
    zmod.t = -0.01;
    const FrameTable zframes = build_frames(g, z.s, zmod);
    const TransportField ztr = assemble_transport(z, zmod, alpha, zframes);
    const FieldState znext = step_ss(z, zmod, alpha, zframes, ztr, nullptr, so);
    for (std::size_t q = 0; q < g.size(); ++q) CHECK(znext.W[q] == 0.0);

    // oversize displacement trips the accuracy gate
    StepOptions big;
    big.ds = 0.5;
    big.ds_max = 1.0;
    CHECK_THROWS_AS(step_ss(st, mod, alpha, frames, tr, nullptr, big), CFLAccuracy);
}

TEST_CASE("step_ss: 1D self-similar Burgers against the characteristics oracle") {
    // evolve exact w1d data one s-unit and compare against the pulled-back
    // physical characteristics solution
    const double eps = 0.01, kappa0 = 20.0, alpha = 1.0;
    const Grid3 g(2049, 1, 1, {30, 0, 0});
    const double s0 = -std::log(eps);
    FieldState st(g, s0, false);
    for (int i = 0; i < g.n1; ++i)
        st.W[g.index(i, 0, 0)] = profiles::w1d(g.coord(0, i));
    ModulationState mod = burgers_mod(kappa0, alpha);
    mod.t = -eps;

    const double ds = 5e-4;
    double xi = 0.0;
    const int steps = static_cast<int>(std::round(1.0 / ds));
    for (int q = 0; q < steps; ++q) {
        const FrameTable frames = build_frames(g, st.s, mod);
        const TransportField tr = assemble_transport(st, mod, alpha, frames);
        StepOptions so;
        so.ds = ds;
        so.ds_max = ds;
        st = step_ss(st, mod, alpha, frames, tr, nullptr, so);
        const double dt = std::exp(-st.s + ds) * (1.0 - std::exp(-ds));
        mod.t += dt;
        xi += kappa0 * dt;
    }
    const double s1 = st.s;
    const double dt_total = mod.t + eps;
    auto w0 = [&](double x) {
        return kappa0 + std::sqrt(eps) * profiles::w1d(std::pow(eps, -1.5) * x);
    };
    double linf = 0.0;
    for (int i = 0; i < g.n1; ++i) {
        const double y = g.coord(0, i);
        if (std::abs(y) > 20.0) continue;
        const double w_ss = std::exp(-0.5 * s1) * st.W[g.index(i, 0, 0)] + kappa0;
        const double x_phys = y * std::exp(-1.5 * s1) + xi;
        const double w_or = oracles::burgers_char(w0, x_phys, dt_total, 0.2);
        linf = std::max(linf, std::abs(w_ss - w_or));
    }
    CHECK(linf <= 1e-4);
}

TEST_CASE("step_ss: pure transport preserves field ranges") {
    const Grid3 g(65, 33, 33, {2, 1, 1});
    const double alpha = 1.0;
    FieldState st = profile_state(g, 4.6, true);
    // smooth compact blobs in Z and A
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            for (int k = 0; k < g.n3; ++k) {
                const Vec3 y = g.node(i, j, k);
                const double r2 = (y - Vec3{0.6, 0.2, 0.0}).norm2() / 0.16;
                st.Z[g.index(i, j, k)] = r2 < 1 ? 0.01 * std::exp(1 - 1 / (1 - r2)) : 0.0;
                st.A2[g.index(i, j, k)] = r2 < 1 ? -0.004 * std::exp(1 - 1 / (1 - r2)) : 0.0;
            }
    ModulationState mod = burgers_mod(20.0, alpha);
    double zmin = 0, zmax = 0, amin = 0, amax = 0;
    for (std::size_t q = 0; q < g.size(); ++q) {
        zmin = std::min(zmin, st.Z[q]);
        zmax = std::max(zmax, st.Z[q]);
        amin = std::min(amin, st.A2[q]);
        amax = std::max(amax, st.A2[q]);
    }
    for (int q = 0; q < 40; ++q) {
        const FrameTable frames = build_frames(g, st.s, mod);
        const TransportField tr = assemble_transport(st, mod, alpha, frames);
        StepOptions so;
        so.ds = 0.005;
        so.ds_max = 0.01;
        st = step_ss(st, mod, alpha, frames, tr, nullptr, so);
    }
    const double ztol = 1e-3 * (zmax - zmin), atol = 1e-3 * (amax - amin);
    for (std::size_t q = 0; q < g.size(); ++q) {
        CHECK(st.Z[q] >= zmin - ztol);
        CHECK(st.Z[q] <= zmax + ztol);
        CHECK(st.A2[q] >= amin - atol);
        CHECK(st.A2[q] <= amax + atol);
    }
}

TEST_CASE("step_physical_1d: Riccati slope, constants, crossing gate") {
    const double eps = 0.04;
    Physical1D st;
    const int n = 2001;
    for (int i = 0; i < n; ++i) {
        const double x = -1.0 + 2.0 * i / (n - 1);
        st.x.push_back(x);
        st.w.push_back(-x / eps);
    }
    const double dt = 0.02;
    const Physical1D out = step_physical_1d(st, dt);
    // linear data stays linear with slope m0/(1 + m0 dt)
    const double m_expect = (-1.0 / eps) / (1.0 - dt / eps);
    const int mid = (n - 1) / 2;
    const double m_num = (out.w[mid + 10] - out.w[mid - 10]) / (out.x[mid + 10] - out.x[mid - 10]);
    CHECK(m_num == doctest::Approx(m_expect).epsilon(1e-4));

    Physical1D cst;
    for (int i = 0; i < 64; ++i) {
        cst.x.push_back(i * 0.1);
        cst.w.push_back(2.5);
    }
    const Physical1D cout = step_physical_1d(cst, 0.5);
    for (double w : cout.w) CHECK(w == doctest::Approx(2.5).epsilon(1e-13));

    CHECK_THROWS_AS(step_physical_1d(st, 2.0 * eps), CharacteristicsCrossed);
}

TEST_CASE("trace_trajectory: escape, fixed point, sweeping flows") {
    const double kappa0 = 20.0, alpha = 1.0;
    const AnalyticBurgersProvider prov(kappa0, alpha);
    const double s0 = 4.6;

    // seeds escape at least at the e^{(s-s0)/5} rate
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int q = 0; q < 25; ++q) {
        Vec3 y0{u(rng), u(rng), u(rng)};
        const double r = 0.05 + 9.0 * std::abs(u(rng));
        y0 = y0 * (r / y0.norm());
        const TrajectoryPath path = trace_trajectory(Flow::W, y0, s0, s0 + 3.0, prov);
        for (const TrajectoryPoint& p : path.pts)
            CHECK(p.y.norm() >= y0.norm() * std::exp((p.s - s0) / 5.0) * (1.0 - 1e-9));
    }

    // the origin is a fixed point of the W flow
    const TrajectoryPath fixed = trace_trajectory(Flow::W, {0, 0, 0}, s0, s0 + 2.0, prov);
    for (const TrajectoryPoint& p : fixed.pts) CHECK(p.y.norm() <= 1e-12);

    // Z flow sweeps left through the origin region
    const TrajectoryPath zp = trace_trajectory(Flow::Z, {1.0, 0.3, 0.0}, s0, s0 + 1.5, prov);
    CHECK(zp.pts.back().y.x1 < -10.0);
}
