#include "shocksim/modulation.hpp"

#include <cmath>

#include "shocksim/errors.hpp"
#include "shocksim/profiles.hpp"
#include "shocksim/textio.hpp"

namespace shocksim::modulation {

namespace {

// 4th-order centered stencils
constexpr double kD1[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
constexpr double kD2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
constexpr double kD3[7] = {1.0 / 8, -1.0, 13.0 / 8, 0.0, -13.0 / 8, 1.0, -1.0 / 8};

struct Sampler {
    const Field& f;
    const Grid3& g;
    int oi, oj, ok;
    bool minus_profile;
    int stride;

    double at(int d1, int d2, int d3) const {
        const int i = oi + d1 * stride, j = oj + d2 * stride, k = ok + d3 * stride;
        double v = f[g.index(i, j, k)];
        // profile-referenced differencing: the stencil sees W - bar_w, and
        // the exact profile jet is restored afterwards, cancelling the
        // profile's own truncation bias in the measured residuals
        if (minus_profile) v -= profiles::bar_w(g.node(i, j, k));
        return v;
    }
    double at_axis(int axis, int off) const {
        int d[3] = {0, 0, 0};
        d[axis] = off;
        return at(d[0], d[1], d[2]);
    }
};

ScalarJet jet_of(const Field& f, const Grid3& g, const bool active[3], bool minus_profile,
                 int stride) {
    int oi, oj, ok;
    g.origin(oi, oj, ok);
    Sampler sm{f, g, oi, oj, ok, minus_profile, stride};
    const double h[3] = {g.h(0) * stride, g.h(1) * stride, g.h(2) * stride};

    ScalarJet out;
    out.val = sm.at(0, 0, 0);

    for (int a = 0; a < 3; ++a) {
        if (!active[a]) continue;
        double s1 = 0.0, s2 = 0.0, s3 = 0.0;
        for (int k = -2; k <= 2; ++k) {
            const double v = sm.at_axis(a, k);
            s1 += kD1[k + 2] * v;
            s2 += kD2[k + 2] * v;
        }
        for (int k = -3; k <= 3; ++k) s3 += kD3[k + 3] * sm.at_axis(a, k);
        out.grad[a] = s1 / h[a];
        out.hess(a, a) = s2 / (h[a] * h[a]);
        out.third(a, a, a) = s3 / (h[a] * h[a] * h[a]);
    }

    // mixed second derivatives: tensor product of first-derivative stencils
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            if (!active[a] || !active[b]) continue;
            double acc = 0.0;
            for (int p = -2; p <= 2; ++p)
                for (int q = -2; q <= 2; ++q) {
                    if (kD1[p + 2] == 0.0 || kD1[q + 2] == 0.0) continue;
                    int d[3] = {0, 0, 0};
                    d[a] = p;
                    d[b] = q;
                    acc += kD1[p + 2] * kD1[q + 2] * sm.at(d[0], d[1], d[2]);
                }
            out.hess(a, b) = acc / (h[a] * h[b]);
        }

    // mixed thirds: d2 x d1 composition, and d1^3 for all-distinct
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            if (a == b || !active[a] || !active[b]) continue;
            double acc = 0.0;
            for (int p = -2; p <= 2; ++p)
                for (int q = -2; q <= 2; ++q) {
                    if (kD2[p + 2] == 0.0 || kD1[q + 2] == 0.0) continue;
                    int d[3] = {0, 0, 0};
                    d[a] = p;
                    d[b] = q;
                    acc += kD2[p + 2] * kD1[q + 2] * sm.at(d[0], d[1], d[2]);
                }
            out.third(a, a, b) = acc / (h[a] * h[a] * h[b]);
        }
    if (active[0] && active[1] && active[2]) {
        double acc = 0.0;
        for (int p = -2; p <= 2; ++p)
            for (int q = -2; q <= 2; ++q)
                for (int r = -2; r <= 2; ++r) {
                    const double w = kD1[p + 2] * kD1[q + 2] * kD1[r + 2];
                    if (w == 0.0) continue;
                    acc += w * sm.at(p, q, r);
                }
        out.third(0, 1, 2) = acc / (h[0] * h[1] * h[2]);
    }
    return out;
}

void active_axes(const Grid3& g, bool active[3]) {
    for (int a = 0; a < 3; ++a) {
        active[a] = g.n(a) > 1;
        if (active[a]) {
            int o = (g.n(a) - 1) / 2;
            if (o < 5 || g.n(a) - 1 - o < 5)
                throw GridTooCoarse("origin needs a 5-cell ball; axis " + std::to_string(a) +
                                    " has " + std::to_string(g.n(a)) + " nodes");
        }
    }
}

} // namespace

int origin_stencil_stride(const Grid3& g) {
    // a doubled stencil spacing suppresses grid-scale interpolation noise
    // in the measured jets (the Nyquist mode is constant on the sublattice)
    int margin = 1 << 20;
    for (int a = 0; a < 3; ++a)
        if (g.n(a) > 1) margin = std::min(margin, (g.n(a) - 1) / 2);
    return margin >= 7 ? 2 : 1;
}

OriginJet origin_jet(const FieldState& state) {
    bool active[3];
    active_axes(state.grid, active);
    const int stride = origin_stencil_stride(state.grid);
    OriginJet jet;
    jet.W = jet_of(state.W, state.grid, active, true, stride);
    // exact profile jet at the origin: value 0, grad (-1,0,0), zero Hessian,
    // thirds d111 = 6, d122 = d133 = 2
    jet.W.grad.x1 += -1.0;
    jet.W.third(0, 0, 0) += 6.0;
    if (active[1]) jet.W.third(0, 1, 1) += 2.0;
    if (active[2]) jet.W.third(0, 2, 2) += 2.0;
    if (state.has_za) {
        jet.Z = jet_of(state.Z, state.grid, active, false, stride);
        jet.A2 = jet_of(state.A2, state.grid, active, false, stride);
        jet.A3 = jet_of(state.A3, state.grid, active, false, stride);
    }
    return jet;
}

Mat3 hessian_inverse(const OriginJet& jet) {
    Sym3 h0;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) h0(i, j) = jet.W.third(0, i, j);
    // degenerate transverse axes (1D runs) leave zero diagonal entries;
    // fill with the profile reference value so the block stays invertible
    for (int a = 1; a < 3; ++a)
        if (h0(a, a) == 0.0) h0(a, a) = 2.0;

    const Mat3 m = h0.full();
    if (std::abs(m.det()) < 1e-6)
        throw HessianDegenerate("det(d1 grad^2 W)(0) = " + fmt_g(m.det(), 6));
    const auto ev = sym3_eigenvalues(h0);
    double min_abs = std::abs(ev[0]);
    for (double e : ev) min_abs = std::min(min_abs, std::abs(e));
    if (min_abs < 1.0)
        throw HessianDegenerate("|(H0)^{-1}| = " + fmt_g(1.0 / min_abs, 6) + " exceeds 1");
    return m.inverse();
}

Rates modulation_rhs(const OriginJet& jet, const ModulationState& mod, double s, double alpha,
                     const ForcingProvider& forcing, const PicardOptions& opt) {
    const coords::Betas b = coords::Betas::from_alpha(alpha);
    if (mod.n_check.norm() >= 0.5)
        throw SimError("modulation_rhs requires |n_check| < 1/2, got " +
                       fmt_g(mod.n_check.norm(), 6));

    const Mat3 h0inv = hessian_inverse(jet);
    const coords::Rotation rot = coords::rotation_from_n(mod.n_check);
    const Mat3& R = rot.R;

    const double es2 = std::exp(0.5 * s);
    const double ems2 = 1.0 / es2;
    const double ems = ems2 * ems2;
    const double ems32 = ems * ems2;

    const double Z0 = jet.Z.val;
    const Vec3 dZ = jet.Z.grad;
    const Sym3& d2Z = jet.Z.hess;
    const double A0[2] = {jet.A2.val, jet.A3.val};
    const ScalarJet* Aj[2] = {&jet.A2, &jet.A3};
    const Sym2 phi2 = mod.phi.squared();

    // second x-derivative contractions of the tangent vectors at the origin
    // (all O(|phi|^2)): T^{zeta,0}_{mu,mu nu}
    auto t_contract = [&](int zeta, int nu) {
        const double p22 = mod.phi(0, 0), p23 = mod.phi(0, 1), p33 = mod.phi(1, 1);
        const double pv2 = mod.phi(0, nu), pv3 = mod.phi(1, nu);
        if (zeta == 0) return -p22 * pv2 - 0.5 * (p23 * pv3 + pv2 * p33);
        return -0.5 * (p22 * pv3 + pv2 * p23) - p33 * pv3;
    };

    // measured constraint residuals; every correction below carries one of
    // these factors and drops out when the constraints hold exactly
    const double lam = opt.feedback;
    const double res_w0 = jet.W.val;
    const double res_d1 = jet.W.grad.x1 + 1.0;
    const double res_dv[2] = {jet.W.grad.x2, jet.W.grad.x3};
    const double res_h1[3] = {jet.W.hess(0, 0), jet.W.hess(0, 1), jet.W.hess(0, 2)};
    const Sym2 res_cc{jet.W.hess(1, 1), jet.W.hess(1, 2), jet.W.hess(2, 2)};

    Rates cur = mod.rates;
    for (int iter = 0; iter < opt.max_iters; ++iter) {
        ModulationState trial = mod;
        trial.rates = cur;
        const double beta_tau = trial.beta_tau();
        const Mat3 qd = rot.q_dot(cur.n_dot);
        const ForcingJet F = forcing(trial);

        // (1/beta_tau) d1-grad of G_W at 0 (analytic), then G_W^0 and
        // h_W^{mu,0} through the Hessian inverse
        Vec3 v;
        v.x1 = F.hess(0, 0) + beta_tau * (b.b2 * es2 * d2Z(0, 0));
        for (int nu = 0; nu < 2; ++nu) {
            double qphi = 0.0;
            for (int ga = 0; ga < 2; ++ga) qphi += qd(ga + 1, 0) * mod.phi(ga, nu);
            v[nu + 1] = F.hess(0, nu + 1) +
                        beta_tau * (b.b2 * es2 * d2Z(0, nu + 1) - 2.0 * b.b1 * ems32 * qphi);
        }
        for (int i = 0; i < 3; ++i) v[i] += (lam + 0.5) * res_h1[i];
        const double GW0 = h0inv.row(0).dot(v);
        const double hW0[2] = {h0inv.row(1).dot(v), h0inv.row(2).dot(v)};

        Rates next;

        // xi_dot
        for (int j = 0; j < 3; ++j) {
            double val = R(j, 0) * ((mod.kappa + b.b2 * Z0) / (2.0 * b.b1) -
                                    ems2 * GW0 / (2.0 * b.b1 * beta_tau));
            for (int mu = 0; mu < 2; ++mu)
                val += R(j, mu + 1) *
                       (A0[mu] - es2 * hW0[mu] / (2.0 * b.b1 * beta_tau));
            next.xi_dot[j] = val;
        }

        // Qdot_{1 nu}, then n_dot through the near-identity 2x2 system
        double q1[2];
        for (int nu = 0; nu < 2; ++nu) {
            const int nuax = nu + 1;
            double acc = 0.0;
            for (int mu = 0; mu < 2; ++mu) acc -= ems2 * qd(0, mu + 1) * Aj[mu]->grad[nuax];
            for (int mu = 0; mu < 2; ++mu)
                for (int ze = 0; ze < 2; ++ze)
                    acc += ems * qd(mu + 1, ze + 1) * A0[ze] * mod.phi(mu, nu);
            for (int mu = 0; mu < 2; ++mu)
                for (int ze = 0; ze < 2; ++ze)
                    acc += ems * qd(mu + 1, nuax) * A0[ze] * mod.phi(ze, mu);
            acc -= b.b2 / (2.0 * b.b1) * es2 * dZ[nuax];
            for (int mu = 0; mu < 2; ++mu) acc += ems * A0[mu] * cur.phi_dot(mu, nu);
            double divA = 0.0, div1A = 0.0, ddivA = 0.0;
            for (int mu = 0; mu < 2; ++mu) {
                divA += Aj[mu]->grad[mu + 1];
                div1A += Aj[mu]->hess(0, mu + 1);
                ddivA += Aj[mu]->hess(nuax, mu + 1);
            }
            (void)div1A;
            acc += b.b3 / (2.0 * b.b1) * ((mod.kappa - Z0) * ddivA - dZ[nuax] * divA);
            acc += b.b3 / b.b1 * ems2 * Z0 * dZ[nuax] * mod.phi.trace();
            for (int ze = 0; ze < 2; ++ze)
                acc += b.b3 / (2.0 * b.b1) * ems * (mod.kappa - Z0) * A0[ze] *
                       t_contract(ze, nu);
            for (int mu = 0; mu < 2; ++mu)
                for (int ga = 0; ga < 2; ++ga)
                    acc += ems2 *
                           (Aj[mu]->grad[nuax] -
                            0.5 * ems2 * (mod.kappa + Z0) * mod.phi(mu, nu)) *
                           A0[ga] * mod.phi(ga, mu);
            for (int mu = 0; mu < 2; ++mu)
                for (int ga = 0; ga < 2; ++ga)
                    acc += hW0[mu] / (2.0 * b.b1 * beta_tau) * Aj[ga]->grad[nuax] *
                           mod.phi(ga, mu);
            for (int ga = 0; ga < 2; ++ga)
                acc -= (es2 * hW0[ga] / (2.0 * b.b1 * beta_tau) - A0[ga]) * mod.phi(ga, nu);
            acc -= lam * res_dv[nu] / (2.0 * b.b1 * beta_tau);
            q1[nu] = acc;
        }
        {
            const double nn = mod.n_check.norm2();
            const double n1 = std::sqrt(1.0 - nn);
            const double g = n1 * (1.0 + n1);
            const double m11 = 1.0 + mod.n_check.x2 * mod.n_check.x2 / g;
            const double m12 = mod.n_check.x2 * mod.n_check.x3 / g;
            const double m22 = 1.0 + mod.n_check.x3 * mod.n_check.x3 / g;
            const double det = m11 * m22 - m12 * m12;
            next.n_dot.x2 = (m22 * q1[0] - m12 * q1[1]) / det;
            next.n_dot.x3 = (m11 * q1[1] - m12 * q1[0]) / det;
        }

        // phi_dot
        {
            const Mat3 qd_next = rot.q_dot(next.n_dot);
            for (int ga = 0; ga < 2; ++ga)
                for (int nu = ga; nu < 2; ++nu) {
                    double val = 0.0;
                    double adv = GW0 * jet.W.third(0, nu + 1, ga + 1);
                    for (int mu = 0; mu < 2; ++mu)
                        adv += hW0[mu] * jet.W.third(mu + 1, nu + 1, ga + 1);
                    val -= es2 / beta_tau * (adv - F.hess(nu + 1, ga + 1));
                    val += b.b2 * es2 * es2 * d2Z(nu + 1, ga + 1);
                    for (int ze = 0; ze < 2; ++ze)
                        val -= 2.0 * b.b1 * (qd_next(ze + 1, ga + 1) * mod.phi(ze, nu) +
                                             qd_next(ze + 1, nu + 1) * mod.phi(ze, ga));
                    const double gw_small = ems2 * GW0 / beta_tau;
                    val += (gw_small - mod.kappa - b.b2 * Z0) * (-phi2(ga, nu));
                    val += phi2(ga, nu) * gw_small;
                    val += lam * es2 * res_cc(ga, nu) / beta_tau;
                    if (ga == 0 && nu == 0) next.phi_dot.a22 = val;
                    if (ga == 0 && nu == 1) next.phi_dot.a23 = val;
                    if (ga == 1 && nu == 1) next.phi_dot.a33 = val;
                }
        }

        // kappa_dot and tau_dot
        next.kappa_dot = es2 * (F.val + GW0 + lam * res_w0) / beta_tau;
        next.tau_dot = F.grad.x1 / beta_tau + b.b2 * es2 * dZ.x1 + lam * res_d1;

        double resid = 0.0;
        auto upd = [&](double a2, double a1) {
            resid = std::max(resid, std::abs(a2 - a1) / std::max(1.0, std::abs(a2)));
        };
        upd(next.kappa_dot, cur.kappa_dot);
        upd(next.tau_dot, cur.tau_dot);
        for (int i = 0; i < 3; ++i) upd(next.xi_dot[i], cur.xi_dot[i]);
        upd(next.n_dot.x2, cur.n_dot.x2);
        upd(next.n_dot.x3, cur.n_dot.x3);
        upd(next.phi_dot.a22, cur.phi_dot.a22);
        upd(next.phi_dot.a23, cur.phi_dot.a23);
        upd(next.phi_dot.a33, cur.phi_dot.a33);
        cur = next;
        if (resid <= opt.tol) return cur;
    }
    throw PicardDiverged("fixed point not reached in " + std::to_string(opt.max_iters) +
                         " iterations");
}

ModulationState advance_modulation(const ModulationState& mod, const Rates& rates, double dt) {
    if (!(dt > 0.0)) throw SimError("advance_modulation requires dt > 0");
    ModulationState out = mod;
    out.kappa += rates.kappa_dot * dt;
    out.tau += rates.tau_dot * dt;
    out.xi = out.xi + rates.xi_dot * dt;
    out.n_check = out.n_check + rates.n_dot * dt;
    out.phi = out.phi + rates.phi_dot * dt;
    out.t += dt;
    out.rates = rates;
    if (out.tau - out.t <= 0.0)
        throw BlowupReached("tau - t = " + fmt_g(out.tau - out.t, 6));
    return out;
}

} // namespace shocksim::modulation
