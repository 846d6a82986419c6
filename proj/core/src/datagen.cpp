#include "shocksim/datagen.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "shocksim/coords.hpp"
#include "shocksim/errors.hpp"
#include "shocksim/profiles.hpp"
#include "shocksim/textio.hpp"

namespace shocksim::datagen {

namespace {

// quintic smoothstep, C^2, 1 -> 0 over [a, b]
double taper(double r, double a, double b) {
    if (r <= a) return 1.0;
    if (r >= b) return 0.0;
    const double t = (r - a) / (b - a);
    return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

// C-infinity unit bump on the unit ball
double bump_fn(double u2) {
    if (u2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u2));
}

double bump_value(const Bump& b, const Vec3& yhat) {
    const Vec3 d{(yhat.x1 - b.center.x1) / b.radius.x1,
                 (yhat.x2 - b.center.x2) / b.radius.x2,
                 (yhat.x3 - b.center.x3) / b.radius.x3};
    return b.amp * bump_fn(d.norm2());
}

} // namespace

Vec3 InitialData::scaled(const Vec3& xt) const {
    const double e32 = std::pow(epsilon, -1.5);
    const double e12 = std::pow(epsilon, -0.5);
    return {xt.x1 * e32, xt.x2 * e12, xt.x3 * e12};
}

double InitialData::s0() const { return -std::log(epsilon); }

double InitialData::w_deviation(const Vec3& xt) const {
    const Vec3 yh = scaled(xt);
    double dev = 0.0;
    for (const Bump& b : perturbation.bumps)
        if (b.field == 0) dev += std::sqrt(epsilon) * bump_value(b, yh);
    if (perturbation.origin_hess.max_abs() != 0.0) {
        const Vec2 xc = xt.check();
        const double cut = taper(yh.check().norm(), 1.0, 2.0);
        dev += 0.5 * xc.dot(perturbation.origin_hess * xc) * cut;
    }
    if (options.profile_taper) {
        // the profile tail removed by the support taper counts as deviation
        const double chi = taper(std::abs(yh.x1), taper1_in, taper1_out) *
                           (options.one_dimensional
                                ? 1.0
                                : taper(yh.check().norm(), taperc_in, taperc_out));
        dev += (chi - 1.0) * std::sqrt(epsilon) * profiles::bar_w(yh);
    }
    return dev;
}

double InitialData::w_tilde(const Vec3& xt) const {
    const Vec3 yh = scaled(xt);
    return kappa0 + std::sqrt(epsilon) * profiles::bar_w(yh) + w_deviation(xt);
}

double InitialData::z_tilde(const Vec3& xt) const {
    const Vec3 yh = scaled(xt);
    double v = 0.0;
    for (const Bump& b : perturbation.bumps)
        if (b.field == 1) v += bump_value(b, yh);
    return v;
}

Vec2 InitialData::a_tilde(const Vec3& xt) const {
    const Vec3 yh = scaled(xt);
    Vec2 v;
    for (const Bump& b : perturbation.bumps) {
        if (b.field == 2) v.x2 += bump_value(b, yh);
        if (b.field == 3) v.x3 += bump_value(b, yh);
    }
    return v;
}

double InitialData::w0(const Vec3& x) const {
    return w_tilde({x.x1 + f0(x.check()), x.x2, x.x3});
}
double InitialData::z0(const Vec3& x) const {
    return z_tilde({x.x1 + f0(x.check()), x.x2, x.x3});
}
Vec2 InitialData::a0(const Vec3& x) const {
    return a_tilde({x.x1 + f0(x.check()), x.x2, x.x3});
}

void InitialData::ss_fields(const Vec3& y, double& W, double& Z, double& A2, double& A3) const {
    const Vec3 x{y.x1 * std::pow(epsilon, 1.5), y.x2 * std::sqrt(epsilon),
                 y.x3 * std::sqrt(epsilon)};
    W = (w0(x) - kappa0) / std::sqrt(epsilon);
    Z = z0(x);
    const Vec2 a = a0(x);
    A2 = a.x2;
    A3 = a.x3;
}

InitialData make_initial_data(double epsilon, double kappa0, double alpha,
                              const PerturbationSpec& pert, const DataOptions& opt) {
    const coords::Betas b = coords::Betas::from_alpha(alpha);
    const double kmin = 3.0 / (1.0 - std::max(b.b1, b.b2));
    if (kappa0 < kmin)
        throw KappaTooSmall("kappa0 = " + fmt_g(kappa0, 6) + " < " + fmt_g(kmin, 6));
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must be in (0,1)");
    if (kappa0 - 3.0 * std::pow(epsilon, 1.0 / 6.0) <= 0.0)
        throw KappaTooSmall("density positivity needs kappa0 > 3 eps^{1/6}");

    InitialData d;
    d.epsilon = epsilon;
    d.kappa0 = kappa0;
    d.alpha = alpha;
    d.perturbation = pert;
    d.options = opt;

    // support taper in scaled units; X0 maps to |yhat1| <= eps^{-1}/2,
    // |yhat_check| <= eps^{-1/3}
    const double lim1 = 0.5 / epsilon;
    const double limc = std::pow(epsilon, -1.0 / 3.0);
    const double inner = 2.0 * std::pow(epsilon, -0.1);  // profile-match ball
    if (opt.one_dimensional) {
        d.taper1_in = std::max(inner + 1.0, 0.5 * lim1);
        d.taper1_out = 0.96 * lim1;
    } else {
        d.taper1_in = std::max(inner + 1.0, 6.0);
        d.taper1_out = std::min(0.96 * lim1, 3.6 * d.taper1_in);
        d.taperc_in = std::max(0.7 * limc, std::min(inner + 0.2, 0.9 * limc));
        d.taperc_out = 0.97 * limc;
    }

    // draw any requested random bumps (deterministic from the seed)
    if (pert.random_bumps > 0) {
        std::mt19937 rng(pert.seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < pert.random_bumps; ++i) {
            Bump bp;
            bp.field = static_cast<int>(u(rng) * 4.0) % 4;
            const double r1 = bp.field == 0 ? 0.8 : 6.0;
            bp.radius = {r1, 0.8, 0.8};
            bp.center = {2.0 + 3.0 * u(rng), -1.0 + 2.0 * u(rng), -1.0 + 2.0 * u(rng)};
            bp.amp = (bp.field == 0 ? 0.02 : 0.2 * epsilon) * (2.0 * u(rng) - 1.0);
            d.perturbation.bumps.push_back(bp);
        }
    }

    // admissibility gates on the bumps
    for (const Bump& bp : d.perturbation.bumps) {
        const double c2 = Vec3{bp.center.x1 / bp.radius.x1, bp.center.x2 / bp.radius.x2,
                               bp.center.x3 / bp.radius.x3}
                              .norm2();
        if (c2 <= 1.0)
            throw PerturbationTooLarge("bump support must exclude the origin");
        if (bp.field == 0) {
            const double cap = 0.5 * std::pow(epsilon, 0.1) *
                               std::pow(profiles::weights(bp.center).eta, 1.0 / 6.0);
            if (std::abs(bp.amp) > cap)
                throw PerturbationTooLarge("w-bump amplitude " + fmt_g(bp.amp, 4) +
                                           " exceeds " + fmt_g(cap, 4));
        } else {
            if (std::abs(bp.amp) > 0.5 * epsilon)
                throw PerturbationTooLarge("z/a bump amplitude exceeds eps/2");
        }
    }
    if (d.perturbation.origin_hess.max_abs() > 1.0)
        throw PerturbationTooLarge("origin transverse Hessian exceeds 1");

    // phi0 = eps * transverse Hessian of w_tilde at 0; only the explicit
    // quadratic contributes (bumps vanish identically near 0)
    d.phi0 = d.perturbation.origin_hess * epsilon;
    return d;
}

const CheckRow* ValidationReport::find(const std::string& name) const {
    for (const CheckRow& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

using ScalarFn = std::function<double(const Vec3&)>;  // of the scaled coordinate

// centered 2nd-order first derivative in scaled coordinates
ScalarFn d1s(const ScalarFn& f, int axis, double h) {
    return [f, axis, h](const Vec3& yh) {
        Vec3 p = yh, m = yh;
        p[axis] += h;
        m[axis] -= h;
        return (f(p) - f(m)) / (2.0 * h);
    };
}

class Validator {
public:
    explicit Validator(const InitialData& data) : d(data) {
        e32 = std::pow(d.epsilon, 1.5);
        e12 = std::sqrt(d.epsilon);
    }

    Vec3 xt_of(const Vec3& yh) const { return {yh.x1 * e32, yh.x2 * e12, yh.x3 * e12}; }

    /// physical derivative d^gamma of a closure, via scaled-coordinate FD
    double deriv(const ScalarFn& f, const Vec3& yh, int g1, int g2, int g3, double h) const {
        ScalarFn cur = f;
        for (int i = 0; i < g1; ++i) cur = d1s(cur, 0, h);
        for (int i = 0; i < g2; ++i) cur = d1s(cur, 1, h);
        for (int i = 0; i < g3; ++i) cur = d1s(cur, 2, h);
        return cur(yh) / (std::pow(e32, g1) * std::pow(e12, g2 + g3));
    }

    void record(const std::string& name, double bound, double measured, const Vec3& at) {
        for (CheckRow& c : rep.checks) {
            if (c.name != name) continue;
            if (measured - bound > c.measured - c.bound) {
                c.bound = bound;
                c.measured = measured;
                c.worst = at;
            }
            return;
        }
        CheckRow c;
        c.name = name;
        c.bound = bound;
        c.measured = measured;
        c.worst = at;
        rep.checks.push_back(c);
    }

    ValidationReport finish() {
        rep.all_pass = true;
        for (CheckRow& c : rep.checks) {
            c.pass = c.measured <= c.bound;
            c.margin = c.bound != 0.0 ? (c.bound - c.measured) / std::abs(c.bound) : 0.0;
            rep.all_pass = rep.all_pass && c.pass;
        }
        return rep;
    }

    const InitialData& d;
    ValidationReport rep;
    double e32, e12;
};

} // namespace

ValidationReport validate_initial_data(const InitialData& d, int k_sobolev) {
    Validator v(d);
    const double eps = d.epsilon;
    const bool dim1 = d.options.one_dimensional;
    const double h = 0.02;  // scaled FD step

    const ScalarFn wt = [&](const Vec3& yh) { return d.w_tilde(v.xt_of(yh)); };
    const ScalarFn wd = [&](const Vec3& yh) { return d.w_deviation(v.xt_of(yh)); };
    const ScalarFn zt = [&](const Vec3& yh) { return d.z_tilde(v.xt_of(yh)); };
    const ScalarFn a2t = [&](const Vec3& yh) { return d.a_tilde(v.xt_of(yh)).x2; };
    const ScalarFn a3t = [&](const Vec3& yh) { return d.a_tilde(v.xt_of(yh)).x3; };

    const double lim1 = 0.5 / eps;
    const double limc = dim1 ? 0.0 : std::pow(eps, -1.0 / 3.0);
    const double inner = 2.0 * std::pow(eps, -0.1);

    // constraints at the origin
    v.record("w0(0)=kappa0", 1e-12, std::abs(wt({0, 0, 0}) - d.kappa0), {});
    v.record("d1w0(0)=-1/eps", 1e-6 / eps, std::abs(v.deriv(wt, {}, 1, 0, 0, h) + 1.0 / eps),
             {});
    if (!dim1) {
        v.record("checkgrad-w0(0)", 1e-8,
                 std::hypot(v.deriv(wt, {}, 0, 1, 0, h), v.deriv(wt, {}, 0, 0, 1, h)), {});
        v.record("grad-d1-w0(0)", 1e-6,
                 std::max({std::abs(v.deriv(wt, {}, 2, 0, 0, h)) * eps,
                           std::abs(v.deriv(wt, {}, 1, 1, 0, h)) * eps,
                           std::abs(v.deriv(wt, {}, 1, 0, 1, h)) * eps}),
                 {});
        v.record("check-two-w0", 1.0, std::abs(v.deriv(wt, {}, 0, 2, 0, h)), {});
        v.record("phi0-def", 1e-10,
                 std::abs(d.phi0.a22 - eps * d.perturbation.origin_hess.a22), {});
    }

    // lattice sweep in scaled coordinates
    const int n1 = 121;
    const int nc = dim1 ? 1 : 17;
    const double ext1 = lim1 * 1.08;
    const double extc = dim1 ? 0.0 : limc * 1.12;

    double min_slope = 1e300;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < nc; ++j)
            for (int k = 0; k < nc; ++k) {
                Vec3 yh{-ext1 + 2.0 * ext1 * i / (n1 - 1), 0.0, 0.0};
                if (!dim1) {
                    yh.x2 = -extc + 2.0 * extc * j / (nc - 1);
                    yh.x3 = -extc + 2.0 * extc * k / (nc - 1);
                }
                const Vec3 xt = v.xt_of(yh);
                const double rho = yh.norm();
                const bool in_x0 =
                    std::abs(yh.x1) <= lim1 && (dim1 || yh.check().norm() <= limc);
                const double wq = eps * eps * eps + xt.x1 * xt.x1 +
                                  std::pow(xt.check().norm2(), 3.0);

                if (!in_x0) {
                    const double dev = std::abs(wt(yh) - d.kappa0) + std::abs(zt(yh)) +
                                       std::abs(a2t(yh)) + std::abs(a3t(yh));
                    v.record("support-in-X0", 1e-12, dev, yh);
                    continue;
                }

                const double d1w = v.deriv(wt, yh, 1, 0, 0, h);
                min_slope = std::min(min_slope, d1w);

                if (rho <= inner) {
                    v.record("tilde-w0-zero", std::pow(eps, 0.1) * std::pow(wq, 1.0 / 6.0),
                             std::abs(wd(yh)), yh);
                    v.record("tilde-w0-d1",
                             std::pow(eps, 1.0 / 11.0) * std::pow(wq, -1.0 / 3.0),
                             std::abs(v.deriv(wd, yh, 1, 0, 0, h)), yh);
                    if (!dim1)
                        v.record("tilde-w0-check", 0.5 * std::pow(eps, 1.0 / 12.0),
                                 std::hypot(v.deriv(wd, yh, 0, 1, 0, h),
                                            v.deriv(wd, yh, 0, 0, 1, h)),
                                 yh);
                }
                if (rho >= 0.5 * std::pow(eps, -0.1)) {
                    v.record("w0-far-zero",
                             (1.0 + std::pow(eps, 1.0 / 11.0)) * std::pow(wq, 1.0 / 6.0),
                             std::abs(wt(yh) - d.kappa0), yh);
                    v.record("w0-far-d1",
                             (1.0 + std::pow(eps, 1.0 / 12.0)) * std::pow(wq, -1.0 / 3.0),
                             std::abs(d1w), yh);
                    if (!dim1)
                        v.record("w0-far-check", 2.0 / 3.0 + std::pow(eps, 1.0 / 13.0),
                                 std::hypot(v.deriv(wt, yh, 0, 1, 0, h),
                                            v.deriv(wt, yh, 0, 0, 1, h)),
                                 yh);
                }
                v.record("w0-d1d1", std::pow(eps, -1.5) * std::pow(wq, -1.0 / 3.0),
                         std::abs(v.deriv(wt, yh, 2, 0, 0, h)), yh);
                if (!dim1) {
                    v.record("w0-d1check",
                             0.5 * std::pow(eps, -0.5) * std::pow(wq, -1.0 / 3.0),
                             std::max(std::abs(v.deriv(wt, yh, 1, 1, 0, h)),
                                      std::abs(v.deriv(wt, yh, 1, 0, 1, h))),
                             yh);
                    v.record("w0-checkcheck", 0.5 * std::pow(wq, -1.0 / 6.0),
                             std::max({std::abs(v.deriv(wt, yh, 0, 2, 0, h)),
                                       std::abs(v.deriv(wt, yh, 0, 1, 1, h)),
                                       std::abs(v.deriv(wt, yh, 0, 0, 2, h))}),
                             yh);
                }

                v.record("z0-amp", eps, std::abs(zt(yh)), yh);
                v.record("z0-d1", 1.0, std::abs(v.deriv(zt, yh, 1, 0, 0, h)), yh);
                v.record("z0-d1d1", std::pow(eps, -1.5),
                         std::abs(v.deriv(zt, yh, 2, 0, 0, h)), yh);
                v.record("a0-amp", eps, std::max(std::abs(a2t(yh)), std::abs(a3t(yh))), yh);
                v.record("a0-d1", 1.0,
                         std::max(std::abs(v.deriv(a2t, yh, 1, 0, 0, h)),
                                  std::abs(v.deriv(a3t, yh, 1, 0, 0, h))),
                         yh);
                if (!dim1) {
                    v.record("z0-check", 0.5 * std::sqrt(eps),
                             std::hypot(v.deriv(zt, yh, 0, 1, 0, h),
                                        v.deriv(zt, yh, 0, 0, 1, h)),
                             yh);
                    v.record("z0-d1check", 0.5 * std::pow(eps, -0.5),
                             std::max(std::abs(v.deriv(zt, yh, 1, 1, 0, h)),
                                      std::abs(v.deriv(zt, yh, 1, 0, 1, h))),
                             yh);
                    v.record("z0-checkcheck", 0.5,
                             std::max({std::abs(v.deriv(zt, yh, 0, 2, 0, h)),
                                       std::abs(v.deriv(zt, yh, 0, 1, 1, h)),
                                       std::abs(v.deriv(zt, yh, 0, 0, 2, h))}),
                             yh);
                    double ac = 0.0, acc = 0.0;
                    for (const ScalarFn* af : {&a2t, &a3t}) {
                        ac = std::max({ac, std::abs(v.deriv(*af, yh, 0, 1, 0, h)),
                                       std::abs(v.deriv(*af, yh, 0, 0, 1, h))});
                        acc = std::max({acc, std::abs(v.deriv(*af, yh, 0, 2, 0, h)),
                                        std::abs(v.deriv(*af, yh, 0, 1, 1, h)),
                                        std::abs(v.deriv(*af, yh, 0, 0, 2, h))});
                    }
                    v.record("a0-check", 0.5 * std::sqrt(eps), ac, yh);
                    v.record("a0-checkcheck", 0.5, acc, yh);
                }
            }
    v.record("min-slope-at-origin", 1e-4 / eps, std::abs(min_slope + 1.0 / eps), {});

    // deviation jet at the origin (orders 3 and 4 in the core ball)
    {
        const double kref = 18.0;
        for (int g1 = 3; g1 >= 0; --g1) {
            const int gc = 3 - g1;
            if (dim1 && gc > 0) continue;
            const double bound =
                0.5 * std::pow(eps, 1.0 - 0.5 * (3.0 * g1 + gc) - 4.0 / (2.0 * kref - 7.0));
            const double val = std::abs(
                v.deriv(wd, {}, g1, gc >= 1 ? 1 : 0, gc >= 2 ? gc - 1 : 0, 0.05));
            v.record("tilde-w0-third-at-0", bound, val, {static_cast<double>(g1), 0, 0});
        }
        for (int i = 0; i < 7; ++i) {
            const Vec3 yh{-0.9 + 0.3 * i, dim1 ? 0.0 : 0.2, dim1 ? 0.0 : -0.1};
            for (int g1 = 4; g1 >= 0; g1 -= (dim1 ? 4 : 2)) {
                const int gc = 4 - g1;
                const double bound = 0.5 * std::pow(eps, 5.0 / 8.0 - 0.5 * (3.0 * g1 + gc));
                const double val = std::abs(v.deriv(wd, yh, g1, gc, 0, 0.08));
                v.record("tilde-w0-fourth", bound, val, yh);
                if (dim1) break;
            }
        }
    }

    // specific vorticity of the initial state
    if (!dim1) {
        double worst = 0.0;
        Vec3 worst_at;
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 7; ++j)
                for (int k = 0; k < 7; ++k) {
                    const Vec3 yh{-40.0 + 10.0 * i, -3.0 + 1.0 * j, -3.0 + 1.0 * k};
                    auto u_at = [&](const Vec3& xt) {
                        const coords::Frame fr = coords::frame_at(d.phi0, xt.check());
                        const double un = 0.5 * (d.w_tilde(xt) + d.z_tilde(xt));
                        const Vec2 a = d.a_tilde(xt);
                        return fr.N * un + fr.T2 * a.x2 + fr.T3 * a.x3;
                    };
                    Mat3 grad;  // grad(c, ax) = d u_c / d x_ax
                    const double hx[3] = {0.05 * v.e32, 0.05 * v.e12, 0.05 * v.e12};
                    for (int ax = 0; ax < 3; ++ax) {
                        Vec3 xp = v.xt_of(yh), xm = v.xt_of(yh);
                        xp[ax] += hx[ax];
                        xm[ax] -= hx[ax];
                        const Vec3 up = u_at(xp), um = u_at(xm);
                        for (int c = 0; c < 3; ++c)
                            grad(c, ax) = (up[c] - um[c]) / (2.0 * hx[ax]);
                    }
                    const Vec3 curl{grad(2, 1) - grad(1, 2), grad(0, 2) - grad(2, 0),
                                    grad(1, 0) - grad(0, 1)};
                    const Vec3 xt = v.xt_of(yh);
                    const double sigma = 0.5 * (d.w_tilde(xt) - d.z_tilde(xt));
                    const double rho0 = std::pow(d.alpha * sigma, 1.0 / d.alpha);
                    const double zeta = curl.norm() / rho0;
                    if (zeta > worst) {
                        worst = zeta;
                        worst_at = yh;
                    }
                }
        v.record("svort-ic", 1.0, worst, worst_at);
    }

    // Sobolev-type weighted check at the largest grid-feasible order
    {
        const int k = std::max(1, std::min(3, k_sobolev));
        const int m1 = 201, mc = dim1 ? 1 : 15;
        const double L1 = lim1 * 1.01, Lc = dim1 ? 0.0 : limc * 1.01;
        const double cell = (2.0 * L1 / (m1 - 1)) * v.e32 *
                            (dim1 ? 1.0
                                  : (2.0 * Lc / (mc - 1)) * (2.0 * Lc / (mc - 1)) * v.e12 *
                                        v.e12);
        for (int g1 = k; g1 >= 0; --g1) {
            const int gc = k - g1;
            if (dim1 && gc > 0) continue;
            double iw = 0.0, iz = 0.0, ia = 0.0;
            for (int i = 0; i < m1; ++i)
                for (int j = 0; j < mc; ++j)
                    for (int kk = 0; kk < mc; ++kk) {
                        Vec3 yh{-L1 + 2.0 * L1 * i / (m1 - 1), 0.0, 0.0};
                        if (!dim1) {
                            yh.x2 = -Lc + 2.0 * Lc * j / (mc - 1);
                            yh.x3 = -Lc + 2.0 * Lc * kk / (mc - 1);
                        }
                        const double hq = 0.1;
                        const double dw = v.deriv(wt, yh, g1, gc, 0, hq);
                        const double dz = v.deriv(zt, yh, g1, gc, 0, hq);
                        const double da2 = v.deriv(a2t, yh, g1, gc, 0, hq);
                        const double da3 = v.deriv(a3t, yh, g1, gc, 0, hq);
                        iw += dw * dw * cell;
                        iz += dz * dz * cell;
                        ia += (da2 * da2 + da3 * da3) * cell;
                    }
            const double bound = 0.5 * std::pow(eps, 3.5 - (3.0 * g1 + gc));
            v.record("Hk-gamma1=" + std::to_string(g1), bound, eps * eps * iw + iz + ia,
                     {static_cast<double>(g1), static_cast<double>(gc), 0});
        }
    }

    return v.finish();
}

} // namespace shocksim::datagen
