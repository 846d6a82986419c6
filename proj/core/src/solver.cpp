#include "shocksim/solver.hpp"

#include <cmath>

#include "shocksim/errors.hpp"
#include "shocksim/ode.hpp"
#include "shocksim/profiles.hpp"
#include "shocksim/textio.hpp"
#include "shocksim/threads.hpp"

namespace shocksim::solver {

using coords::Betas;

FrameTable build_frames(const Grid3& grid, double s, const ModulationState& mod) {
    const double ems2 = std::exp(-0.5 * s);
    FrameTable t;
    const std::size_t nt =
        static_cast<std::size_t>(grid.n2) * static_cast<std::size_t>(grid.n3);
    t.fr.resize(nt);
    t.der.resize(nt);
    t.rate.resize(nt);
    for (int j = 0; j < grid.n2; ++j)
        for (int k = 0; k < grid.n3; ++k) {
            const Vec2 xc{ems2 * grid.coord(1, j), ems2 * grid.coord(2, k)};
            const std::size_t id = static_cast<std::size_t>(j) *
                                       static_cast<std::size_t>(grid.n3) +
                                   static_cast<std::size_t>(k);
            t.fr[id] = coords::frame_at(mod.phi, xc);
            t.der[id] = coords::frame_derivs(mod.phi, xc);
            t.rate[id] = coords::frame_rates(mod.phi, mod.rates.phi_dot, xc);
        }
    return t;
}

namespace {

struct NodeGeometry {
    const coords::Frame* fr;
    const coords::FrameDerivs* der;
    const coords::FrameRates* rate;
    Vec3 V;
    double f_dot;
};

// Drift velocity V at a node per the modulation parameters.
Vec3 drift_velocity(const Vec3& y, double s, const ModulationState& mod, const Mat3& R,
                    const Mat3& qd, double f_phys) {
    const double ems2 = std::exp(-0.5 * s);
    const double ems32 = ems2 * ems2 * ems2;
    Vec3 v;
    for (int i = 0; i < 3; ++i) {
        double val = qd(i, 0) * (ems32 * y.x1 + f_phys);
        val += ems2 * (qd(i, 1) * y.x2 + qd(i, 2) * y.x3);
        double rx = 0.0;
        for (int j = 0; j < 3; ++j) rx += R(j, i) * mod.rates.xi_dot[j];
        v[i] = val - rx;
    }
    return v;
}

struct ForcingTerms {
    double FW = 0.0, FZ = 0.0, FA2 = 0.0, FA3 = 0.0;
};

// All four forcing values at one node. dA[nu][mu] = d A_nu / d y_{mu+2},
// dS[mu] likewise; geometry carries frames and V at the node.
ForcingTerms forcing_at(const Betas& b, double beta_tau, double s, double kappa, double W,
                        double Z, double A2v, double A3v, const double dA[2][2],
                        const double dS[2], const NodeGeometry& geo, const Mat3& qd) {
    const double ems2 = std::exp(-0.5 * s);
    const double ems = ems2 * ems2;
    const coords::Frame& fr = *geo.fr;
    const coords::FrameDerivs& der = *geo.der;
    const coords::FrameRates& rt = *geo.rate;

    const double wphys = ems2 * W + kappa;
    const double UN = 0.5 * (wphys + Z);
    const double S = 0.5 * (wphys - Z);
    const double Aval[2] = {A2v, A3v};
    const Vec3* T[2] = {&fr.T2, &fr.T3};
    const Vec3* Tdot[2] = {&rt.T2_dot, &rt.T3_dot};
    const Vec3* dT[2][2] = {{&der.dT2[0], &der.dT2[1]}, {&der.dT3[0], &der.dT3[1]}};

    // common contractions
    double TdA = 0.0;  // T^nu_mu dA_nu/dy_mu
    for (int nu = 0; nu < 2; ++nu)
        for (int mu = 0; mu < 2; ++mu) TdA += (*T[nu])[mu + 1] * dA[nu][mu];
    Vec3 AT = fr.T2 * A2v + fr.T3 * A3v;  // A_gamma T^gamma (3-vector)
    double ATNdot = AT.dot(rt.N_dot);
    double QATN = (qd * AT).dot(fr.N);
    const double Tmm[2] = {der.dT2[0].x2 + der.dT2[1].x3, der.dT3[0].x2 + der.dT3[1].x3};
    const double Nmm = der.dN[0].x2 + der.dN[1].x3;

    // sum over mu of (V_mu + N_mu UN + (AT)_mu) * (AT . dN[mu])
    double conv = 0.0;
    for (int mu = 0; mu < 2; ++mu) {
        const double coeff = geo.V[mu + 1] + fr.N[mu + 1] * UN + AT[mu + 1];
        conv += coeff * AT.dot(der.dN[mu]);
    }

    ForcingTerms out;
    out.FW = -2.0 * b.b3 * beta_tau * S * TdA + 2.0 * b.b1 * beta_tau * ems2 * ATNdot +
             2.0 * b.b1 * beta_tau * ems2 * QATN + 2.0 * b.b1 * beta_tau * ems2 * conv -
             2.0 * b.b3 * beta_tau * ems2 * S *
                 (Aval[0] * Tmm[0] + Aval[1] * Tmm[1] + UN * Nmm);

    out.FZ = 2.0 * b.b3 * beta_tau * ems2 * S * TdA + 2.0 * b.b1 * beta_tau * ems * ATNdot +
             2.0 * b.b1 * beta_tau * ems * QATN + 2.0 * b.b1 * beta_tau * ems * conv +
             2.0 * b.b3 * beta_tau * ems * S *
                 (Aval[0] * Tmm[0] + Aval[1] * Tmm[1] + UN * Nmm);

    const Vec3 UNN_AT = fr.N * UN + AT;  // U.N N + A_gamma T^gamma
    for (int nu = 0; nu < 2; ++nu) {
        double TdS = 0.0;
        for (int mu = 0; mu < 2; ++mu) TdS += (*T[nu])[mu + 1] * dS[mu];
        double val = -2.0 * b.b3 * beta_tau * ems2 * S * TdS;
        val += 2.0 * b.b1 * beta_tau * ems * UNN_AT.dot(*Tdot[nu]);
        val += 2.0 * b.b1 * beta_tau * ems * (qd * UNN_AT).dot(*T[nu]);
        double cv = 0.0;
        for (int mu = 0; mu < 2; ++mu) {
            const double coeff = geo.V[mu + 1] + UNN_AT[mu + 1];
            cv += coeff * UNN_AT.dot(*dT[nu][mu]);
        }
        val += 2.0 * b.b1 * beta_tau * ems * cv;
        (nu == 0 ? out.FA2 : out.FA3) = val;
    }
    return out;
}

} // namespace

TransportField assemble_transport(const FieldState& state, const ModulationState& mod,
                                  double alpha, const FrameTable& frames) {
    const Grid3& g = state.grid;
    const Betas b = Betas::from_alpha(alpha);
    const double s = state.s;
    const double beta_tau = mod.beta_tau();
    const double es2 = std::exp(0.5 * s);
    const double ems2 = 1.0 / es2;
    const double ems = ems2 * ems2;

    const coords::Rotation rot = coords::rotation_from_n(mod.n_check);
    const Mat3 qd = rot.q_dot(mod.rates.n_dot);

    TransportField t;
    t.gW.assign(g.size(), 0.0);
    t.gZ.assign(g.size(), 0.0);
    t.gU.assign(g.size(), 0.0);
    t.hW2.assign(g.size(), 0.0);
    t.hW3.assign(g.size(), 0.0);
    t.hZ2.assign(g.size(), 0.0);
    t.hZ3.assign(g.size(), 0.0);
    t.hU2.assign(g.size(), 0.0);
    t.hU3.assign(g.size(), 0.0);
    t.V1.assign(g.size(), 0.0);
    t.V2.assign(g.size(), 0.0);
    t.V3.assign(g.size(), 0.0);

    const std::size_t plane = static_cast<std::size_t>(g.n2) * static_cast<std::size_t>(g.n3);
    parallel_for(g.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t id = lo; id < hi; ++id) {
            const int i = static_cast<int>(id / plane);
            const int rem = static_cast<int>(id % plane);
            const int j = rem / g.n3;
            const int k = rem % g.n3;
            const Vec3 y = g.node(i, j, k);
            const std::size_t tid = static_cast<std::size_t>(j) *
                                        static_cast<std::size_t>(g.n3) +
                                    static_cast<std::size_t>(k);
            const coords::Frame& fr = frames.fr[tid];

            const double W = state.W[id];
            const double Z = state.has_za ? state.Z[id] : 0.0;
            const double A2v = state.has_za ? state.A2[id] : 0.0;
            const double A3v = state.has_za ? state.A3[id] : 0.0;

            const Vec3 V = drift_velocity(y, s, mod, rot.R, qd, fr.f);
            const Vec2 xc{ems2 * y.x2, ems2 * y.x3};
            const double f_dot = 0.5 * xc.dot(mod.rates.phi_dot * xc);
            const double VN = V.dot(fr.N);

            t.V1[id] = V.x1;
            t.V2[id] = V.x2;
            t.V3[id] = V.x3;

            const double base = -f_dot + fr.J * 2.0 * b.b1 * VN;
            t.gW[id] = beta_tau * fr.J * W +
                       beta_tau * es2 * (base + fr.J * (mod.kappa + b.b2 * Z));
            t.gZ[id] = b.b2 * beta_tau * fr.J * W +
                       beta_tau * es2 * (base + fr.J * (b.b2 * mod.kappa + Z));
            t.gU[id] = b.b1 * beta_tau * fr.J * W +
                       beta_tau * es2 * (base + fr.J * (b.b1 * mod.kappa + b.b1 * Z));

            const double AT2 = A2v * fr.T2.x2 + A3v * fr.T3.x2;
            const double AT3 = A2v * fr.T2.x3 + A3v * fr.T3.x3;
            for (int mu = 0; mu < 2; ++mu) {
                const double Nmu = fr.N[mu + 1];
                const double Vmu = V[mu + 1];
                const double ATmu = mu == 0 ? AT2 : AT3;
                const double hW = beta_tau * ems * Nmu * W +
                                  beta_tau * ems2 *
                                      (2.0 * b.b1 * Vmu + Nmu * mod.kappa - b.b2 * Nmu * Z +
                                       2.0 * b.b1 * ATmu);
                const double hZ = b.b2 * beta_tau * ems * Nmu * W +
                                  beta_tau * ems2 *
                                      (2.0 * b.b1 * Vmu + b.b2 * Nmu * mod.kappa + Nmu * Z +
                                       2.0 * b.b1 * ATmu);
                const double hU = b.b1 * beta_tau * ems * Nmu * W +
                                  beta_tau * ems2 *
                                      (2.0 * b.b1 * Vmu + b.b1 * Nmu * mod.kappa +
                                       b.b1 * Nmu * Z + 2.0 * b.b1 * ATmu);
                (mu == 0 ? t.hW2 : t.hW3)[id] = hW;
                (mu == 0 ? t.hZ2 : t.hZ3)[id] = hZ;
                (mu == 0 ? t.hU2 : t.hU3)[id] = hU;
            }
        }
    });
    return t;
}

ForcingField assemble_forcing(const FieldState& state, const ModulationState& mod, double alpha,
                              const FrameTable& frames) {
    const Grid3& g = state.grid;
    ForcingField f;
    f.FW.assign(g.size(), 0.0);
    f.FZ.assign(g.size(), 0.0);
    f.FA2.assign(g.size(), 0.0);
    f.FA3.assign(g.size(), 0.0);
    if (!state.has_za) return f;

    const Betas b = Betas::from_alpha(alpha);
    const double s = state.s;
    const double beta_tau = mod.beta_tau();
    const double ems2 = std::exp(-0.5 * s);
    const coords::Rotation rot = coords::rotation_from_n(mod.n_check);
    const Mat3 qd = rot.q_dot(mod.rates.n_dot);

    const std::size_t plane = static_cast<std::size_t>(g.n2) * static_cast<std::size_t>(g.n3);
    parallel_for(g.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t id = lo; id < hi; ++id) {
            const int i = static_cast<int>(id / plane);
            const int rem = static_cast<int>(id % plane);
            const int j = rem / g.n3;
            const int k = rem % g.n3;
            const Vec3 y = g.node(i, j, k);
            const std::size_t tid = static_cast<std::size_t>(j) *
                                        static_cast<std::size_t>(g.n3) +
                                    static_cast<std::size_t>(k);
            NodeGeometry geo;
            geo.fr = &frames.fr[tid];
            geo.der = &frames.der[tid];
            geo.rate = &frames.rate[tid];
            geo.V = drift_velocity(y, s, mod, rot.R, qd, geo.fr->f);
            geo.f_dot = 0.0;

            double dA[2][2], dS[2];
            for (int mu = 0; mu < 2; ++mu) {
                const int axis = mu + 1;
                dA[0][mu] = deriv1_4th(state.A2, g, axis, i, j, k);
                dA[1][mu] = deriv1_4th(state.A3, g, axis, i, j, k);
                const double dW = deriv1_4th(state.W, g, axis, i, j, k);
                const double dZ = deriv1_4th(state.Z, g, axis, i, j, k);
                dS[mu] = 0.5 * (ems2 * dW - dZ);
            }
            const ForcingTerms ft =
                forcing_at(b, beta_tau, s, mod.kappa, state.W[id], state.Z[id], state.A2[id],
                           state.A3[id], dA, dS, geo, qd);
            f.FW[id] = ft.FW;
            f.FZ[id] = ft.FZ;
            f.FA2[id] = ft.FA2;
            f.FA3[id] = ft.FA3;
        }
    });
    return f;
}

modulation::ForcingJet forcing_origin_jet(const FieldState& state, const ModulationState& trial,
                                          double alpha) {
    modulation::ForcingJet jet;
    if (!state.has_za) return jet;  // Burgers reduction: F identically zero

    const Grid3& g = state.grid;
    const Betas b = Betas::from_alpha(alpha);
    const double s = state.s;
    const double beta_tau = trial.beta_tau();
    const double ems2 = std::exp(-0.5 * s);
    const coords::Rotation rot = coords::rotation_from_n(trial.n_check);
    const Mat3 qd = rot.q_dot(trial.rates.n_dot);

    int oi, oj, ok;
    g.origin(oi, oj, ok);
    const bool act2 = g.n2 > 1, act3 = g.n3 > 1;
    const int m = modulation::origin_stencil_stride(g);

    // F_W on the 5x5x5 patch around the origin (degenerate axes collapse),
    // spaced like the origin-jet stencil
    double patch[5][5][5] = {};
    for (int di = -2; di <= 2; ++di)
        for (int dj = -2; dj <= 2; ++dj)
            for (int dk = -2; dk <= 2; ++dk) {
                if ((!act2 && dj != 0) || (!act3 && dk != 0)) continue;
                const int i = oi + di * m, j = oj + dj * m, k = ok + dk * m;
                const Vec3 y = g.node(i, j, k);
                const Vec2 xc{ems2 * y.x2, ems2 * y.x3};
                NodeGeometry geo;
                coords::Frame fr = coords::frame_at(trial.phi, xc);
                coords::FrameDerivs der = coords::frame_derivs(trial.phi, xc);
                coords::FrameRates rate =
                    coords::frame_rates(trial.phi, trial.rates.phi_dot, xc);
                geo.fr = &fr;
                geo.der = &der;
                geo.rate = &rate;
                geo.V = drift_velocity(y, s, trial, rot.R, qd, fr.f);

                double dA[2][2] = {{0, 0}, {0, 0}}, dS[2] = {0, 0};
                for (int mu = 0; mu < 2; ++mu) {
                    const int axis = mu + 1;
                    if (g.n(axis) == 1) continue;
                    dA[0][mu] = deriv1_4th(state.A2, g, axis, i, j, k);
                    dA[1][mu] = deriv1_4th(state.A3, g, axis, i, j, k);
                    const double dW = deriv1_4th(state.W, g, axis, i, j, k);
                    const double dZ = deriv1_4th(state.Z, g, axis, i, j, k);
                    dS[mu] = 0.5 * (ems2 * dW - dZ);
                }
                const std::size_t id = g.index(i, j, k);
                const ForcingTerms ft =
                    forcing_at(b, beta_tau, s, trial.kappa, state.W[id], state.Z[id],
                               state.A2[id], state.A3[id], dA, dS, geo, qd);
                patch[di + 2][dj + 2][dk + 2] = ft.FW;
            }

    constexpr double kD1[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
    constexpr double kD2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
    const double h[3] = {g.h(0) * m, g.h(1) * m, g.h(2) * m};
    const bool act[3] = {g.n1 > 1, act2, act3};

    auto pat = [&](int a, int bq, int c) { return patch[a + 2][bq + 2][c + 2]; };
    jet.val = pat(0, 0, 0);
    for (int axis = 0; axis < 3; ++axis) {
        if (!act[axis]) continue;
        double s1 = 0.0, s2 = 0.0;
        for (int q = -2; q <= 2; ++q) {
            int d[3] = {0, 0, 0};
            d[axis] = q;
            const double v = pat(d[0], d[1], d[2]);
            s1 += kD1[q + 2] * v;
            s2 += kD2[q + 2] * v;
        }
        jet.grad[axis] = s1 / h[axis];
        jet.hess(axis, axis) = s2 / (h[axis] * h[axis]);
    }
    for (int a = 0; a < 3; ++a)
        for (int c = a + 1; c < 3; ++c) {
            if (!act[a] || !act[c]) continue;
            double acc = 0.0;
            for (int p = -2; p <= 2; ++p)
                for (int q = -2; q <= 2; ++q) {
                    if (kD1[p + 2] == 0.0 || kD1[q + 2] == 0.0) continue;
                    int d[3] = {0, 0, 0};
                    d[a] = p;
                    d[c] = q;
                    acc += kD1[p + 2] * kD1[q + 2] * pat(d[0], d[1], d[2]);
                }
            jet.hess(a, c) = acc / (h[a] * h[c]);
        }
    return jet;
}

FieldState step_ss(const FieldState& state, const ModulationState& mod, double alpha,
                   const FrameTable& frames, const TransportField& transport,
                   const ForcingField* forcing, const StepOptions& opt) {
    const Grid3& g = state.grid;
    const double ds = opt.ds;
    if (!(ds > 0.0) || ds > opt.ds_max)
        throw SimError("step_ss requires ds in (0, ds_max]");
    (void)alpha;
    (void)frames;

    FieldState out(g, state.s + ds, state.has_za);

    static const ForcingField kNoForcing{};
    const bool with_forcing = forcing != nullptr && state.has_za;
    const ForcingField& fhalf =
        !with_forcing ? kNoForcing
                      : (opt.forcing_half != nullptr ? *opt.forcing_half : *forcing);
    const TransportField& thalf =
        opt.transport_half != nullptr ? *opt.transport_half : transport;

    const double amp = std::exp(0.5 * ds);
    const double quad_w = ds * std::exp(0.25 * ds);
    // spatially constant kappa_dot source in the W equation, at half time
    const double kappa_src =
        -std::exp(-0.5 * (state.s + 0.5 * ds)) * mod.beta_tau() * mod.rates.kappa_dot;

    const std::size_t plane = static_cast<std::size_t>(g.n2) * static_cast<std::size_t>(g.n3);

    auto velocity = [&](const Field& gf, const Field& h2f, const Field& h3f,
                        const Vec3& y) -> Vec3 {
        return {sample(gf, g, y, Extension::ClampEdge) + 1.5 * y.x1,
                g.n2 > 1 ? sample(h2f, g, y, Extension::ClampEdge) + 0.5 * y.x2 : 0.0,
                g.n3 > 1 ? sample(h3f, g, y, Extension::ClampEdge) + 0.5 * y.x3 : 0.0};
    };

    parallel_for(g.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t id = lo; id < hi; ++id) {
            const int i = static_cast<int>(id / plane);
            const int rem = static_cast<int>(id % plane);
            const int j = rem / g.n3;
            const int k = rem % g.n3;
            const Vec3 y = g.node(i, j, k);

            auto backtrack = [&](const Field& gf, const Field& h2f, const Field& h3f,
                                 const Field& gh, const Field& h2h, const Field& h3h,
                                 Vec3& y_half) -> Vec3 {
                Vec3 v1{gf[id] + 1.5 * y.x1, 0.0, 0.0};
                if (g.n2 > 1) v1.x2 = h2f[id] + 0.5 * y.x2;
                if (g.n3 > 1) v1.x3 = h3f[id] + 0.5 * y.x3;
                y_half = y - v1 * (0.5 * ds);
                const Vec3 v2 = velocity(gh, h2h, h3h, y_half);
                const Vec3 dep = y - v2 * ds;
                for (int a = 0; a < 3; ++a) {
                    if (g.n(a) == 1) continue;
                    if (std::abs(dep[a] - y[a]) > 3.0 * g.h(a))
                        throw CFLAccuracy("backtrack displacement " +
                                          fmt_g(std::abs(dep[a] - y[a]) / g.h(a), 4) +
                                          " cells on axis " + std::to_string(a));
                }
                return dep;
            };

            Vec3 y_half;
            const Vec3 depW = backtrack(transport.gW, transport.hW2, transport.hW3,
                                        thalf.gW, thalf.hW2, thalf.hW3, y_half);
            double w_new = amp * sample(state.W, g, depW, Extension::ClampedLinear);
            if (with_forcing)
                w_new += quad_w * (sample(fhalf.FW, g, y_half, Extension::Zero) + kappa_src);
            else
                w_new += quad_w * kappa_src;
            out.W[id] = w_new;

            if (state.has_za) {
                Vec3 yhZ;
                const Vec3 depZ = backtrack(transport.gZ, transport.hZ2, transport.hZ3,
                                            thalf.gZ, thalf.hZ2, thalf.hZ3, yhZ);
                double z_new = sample(state.Z, g, depZ, Extension::Zero);
                if (with_forcing) z_new += ds * sample(fhalf.FZ, g, yhZ, Extension::Zero);
                out.Z[id] = z_new;

                Vec3 yhU;
                const Vec3 depU = backtrack(transport.gU, transport.hU2, transport.hU3,
                                            thalf.gU, thalf.hU2, thalf.hU3, yhU);
                double a2_new = sample(state.A2, g, depU, Extension::Zero);
                double a3_new = sample(state.A3, g, depU, Extension::Zero);
                if (with_forcing) {
                    a2_new += ds * sample(fhalf.FA2, g, yhU, Extension::Zero);
                    a3_new += ds * sample(fhalf.FA3, g, yhU, Extension::Zero);
                }
                out.A2[id] = a2_new;
                out.A3[id] = a3_new;
            }
        }
    });

    for (std::size_t id = 0; id < g.size(); ++id) {
        if (!std::isfinite(out.W[id]))
            throw NonFinite("W overflow at node " + std::to_string(id));
    }
    if (state.has_za)
        for (std::size_t id = 0; id < g.size(); ++id)
            if (!std::isfinite(out.Z[id]) || !std::isfinite(out.A2[id]) ||
                !std::isfinite(out.A3[id]))
                throw NonFinite("Z/A overflow at node " + std::to_string(id));
    return out;
}

Vec3 AnalyticBurgersProvider::velocity(Flow which, const Vec3& y, double s) const {
    const double wbar = profiles::bar_w(y);
    const double es2 = std::exp(0.5 * s);
    switch (which) {
        case Flow::W:
            return {1.5 * y.x1 + wbar, 0.5 * y.x2, 0.5 * y.x3};
        case Flow::Z:
            return {1.5 * y.x1 + betas_.b2 * wbar - (1.0 - betas_.b2) * kappa_ * es2,
                    0.5 * y.x2, 0.5 * y.x3};
        case Flow::U:
        default:
            return {1.5 * y.x1 + betas_.b1 * wbar - (1.0 - betas_.b1) * kappa_ * es2,
                    0.5 * y.x2, 0.5 * y.x3};
    }
}

Vec3 FrozenGridProvider::velocity(Flow which, const Vec3& y, double) const {
    const Field* gf = nullptr;
    const Field *h2f = nullptr, *h3f = nullptr;
    switch (which) {
        case Flow::W: gf = &tr_.gW; h2f = &tr_.hW2; h3f = &tr_.hW3; break;
        case Flow::Z: gf = &tr_.gZ; h2f = &tr_.hZ2; h3f = &tr_.hZ3; break;
        case Flow::U: default: gf = &tr_.gU; h2f = &tr_.hU2; h3f = &tr_.hU3; break;
    }
    Vec3 v{sample(*gf, grid_, y, Extension::ClampEdge) + 1.5 * y.x1, 0.0, 0.0};
    if (grid_.n2 > 1) v.x2 = sample(*h2f, grid_, y, Extension::ClampEdge) + 0.5 * y.x2;
    if (grid_.n3 > 1) v.x3 = sample(*h3f, grid_, y, Extension::ClampEdge) + 0.5 * y.x3;
    return v;
}

TrajectoryPath trace_trajectory(Flow which, const Vec3& y0, double s0, double s1,
                                const TransportProvider& provider, const TraceOptions& opt) {
    if (s1 < s0) throw SimError("trace_trajectory requires s1 >= s0");
    using State = std::array<double, 3>;
    DormandPrince<3>::Options dp_opt;
    dp_opt.rel_tol = opt.rel_tol;
    dp_opt.abs_tol = 1e-12;
    dp_opt.max_step = opt.sample_ds;
    dp_opt.max_steps = opt.max_steps;
    DormandPrince<3> dp(
        [&](double s, const State& y, State& dy) {
            const Vec3 v = provider.velocity(which, {y[0], y[1], y[2]}, s);
            dy = {v.x1, v.x2, v.x3};
        },
        dp_opt);

    TrajectoryPath path;
    State y{y0.x1, y0.x2, y0.x3};
    double s = s0;
    double h = 1e-3;
    path.pts.push_back({s, y0});
    std::size_t steps = 0;
    while (s < s1) {
        if (++steps > opt.max_steps)
            throw TrajectoryStall("trajectory exceeded step budget");
        s = dp.step(s, y, s1, h);
        const Vec3 p{y[0], y[1], y[2]};
        path.pts.push_back({s, p});
        if (!provider.in_domain(p)) {
            path.left_domain = true;
            break;
        }
    }
    return path;
}

} // namespace shocksim::solver
