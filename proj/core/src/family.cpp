#include "shocksim/family.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "shocksim/errors.hpp"
#include "shocksim/ode.hpp"
#include "shocksim/quasi_random.hpp"
#include "shocksim/textio.hpp"

namespace shocksim::family {

int FamilySpec::slot(const MultiIndex& a) {
    // canonical order of the ten |alpha| = 3 indices
    static const std::vector<MultiIndex> order3 = [] {
        std::vector<MultiIndex> v;
        for (const MultiIndex& m : multi_indices_up_to(3))
            if (m.order() == 3) v.push_back(m);
        return v;
    }();
    for (std::size_t i = 0; i < order3.size(); ++i)
        if (order3[i] == a) return static_cast<int>(i);
    return -1;
}

Sym3 FamilySpec::second_seed_matrix() const {
    Sym3 m;
    for (int j = 0; j < 3; ++j)
        for (int k = j; k < 3; ++k) {
            MultiIndex a{1, 0, 0};
            if (j == 0) a.a1 += 1; else if (j == 1) a.a2 += 1; else a.a3 += 1;
            if (k == 0) a.a1 += 1; else if (k == 1) a.a2 += 1; else a.a3 += 1;
            m(j, k) = at(a);
        }
    return m;
}

FamilySpec FamilySpec::bar_w_seed() {
    FamilySpec s;
    s.at({3, 0, 0}) = 6.0;
    s.at({1, 2, 0}) = 2.0;
    s.at({1, 0, 2}) = 2.0;
    return s;
}

int CoeffTable::flat(const MultiIndex& a) const {
    // offset of all orders below |a|, then position within the order
    const int n = a.order();
    int base = 0;
    for (int m = 0; m < n; ++m) base += (m + 1) * (m + 2) / 2;
    int pos = 0;
    for (int a1 = n; a1 > a.a1; --a1) pos += n - a1 + 1;
    pos += (n - a.a1) - a.a2;
    return base + pos;
}

double CoeffTable::coeff(const MultiIndex& a) const {
    if (a.order() > max_order_) return 0.0;
    return coeffs_[static_cast<std::size_t>(flat(a))];
}

void CoeffTable::set_coeff(const MultiIndex& a, double v) {
    coeffs_[static_cast<std::size_t>(flat(a))] = v;
}

double CoeffTable::eval(const Vec3& y) const {
    if (y.norm() > convergence_radius())
        throw OutOfRadius("|y| = " + fmt_g(y.norm(), 6) + " exceeds r0 = " +
                          fmt_g(convergence_radius(), 6));
    return eval_unchecked(y);
}

double CoeffTable::eval_unchecked(const Vec3& y) const {
    std::vector<double> p1(static_cast<std::size_t>(max_order_) + 1, 1.0);
    std::vector<double> p2 = p1, p3 = p1;
    for (int k = 1; k <= max_order_; ++k) {
        p1[static_cast<std::size_t>(k)] = p1[static_cast<std::size_t>(k - 1)] * y.x1;
        p2[static_cast<std::size_t>(k)] = p2[static_cast<std::size_t>(k - 1)] * y.x2;
        p3[static_cast<std::size_t>(k)] = p3[static_cast<std::size_t>(k - 1)] * y.x3;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < index_.size(); ++i) {
        const double c = coeffs_[i];
        if (c == 0.0) continue;
        const MultiIndex& a = index_[i];
        sum += c * p1[static_cast<std::size_t>(a.a1)] * p2[static_cast<std::size_t>(a.a2)] *
               p3[static_cast<std::size_t>(a.a3)];
    }
    return sum;
}

Vec3 CoeffTable::grad_unchecked(const Vec3& y) const {
    std::vector<double> p1(static_cast<std::size_t>(max_order_) + 1, 1.0);
    std::vector<double> p2 = p1, p3 = p1;
    for (int k = 1; k <= max_order_; ++k) {
        p1[static_cast<std::size_t>(k)] = p1[static_cast<std::size_t>(k - 1)] * y.x1;
        p2[static_cast<std::size_t>(k)] = p2[static_cast<std::size_t>(k - 1)] * y.x2;
        p3[static_cast<std::size_t>(k)] = p3[static_cast<std::size_t>(k - 1)] * y.x3;
    }
    Vec3 g;
    for (std::size_t i = 0; i < index_.size(); ++i) {
        const double c = coeffs_[i];
        if (c == 0.0) continue;
        const MultiIndex& a = index_[i];
        const double f1 = p1[static_cast<std::size_t>(a.a1)];
        const double f2 = p2[static_cast<std::size_t>(a.a2)];
        const double f3 = p3[static_cast<std::size_t>(a.a3)];
        if (a.a1 > 0) g.x1 += c * a.a1 * p1[static_cast<std::size_t>(a.a1 - 1)] * f2 * f3;
        if (a.a2 > 0) g.x2 += c * a.a2 * f1 * p2[static_cast<std::size_t>(a.a2 - 1)] * f3;
        if (a.a3 > 0) g.x3 += c * a.a3 * f1 * f2 * p3[static_cast<std::size_t>(a.a3 - 1)];
    }
    return g;
}

double CoeffTable::tail_bound(const Vec3& y) const {
    const double q = 4.0 * growth_d_ * y.norm();
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    double sum = 0.0, qn = std::pow(q, max_order_ + 1);
    for (int n = max_order_ + 1; n < max_order_ + 2000; ++n) {
        const double term = 0.5 * (n + 1) * (n + 2) * qn;
        sum += term;
        if (term < 1e-300) break;
        qn *= q;
    }
    return sum;
}

CoeffTable taylor_coeffs(const FamilySpec& spec, int max_order) {
    if (max_order < 3) throw DegenerateFamily("max_order must be >= 3");
    const Sym3 m = spec.second_seed_matrix();
    const auto ev = sym3_eigenvalues(m);
    if (ev[0] <= 0.0)
        throw DegenerateFamily("seed matrix A_{1jk} is not positive definite (min eig = " +
                               fmt_g(ev[0], 6) + ")");

    CoeffTable table(max_order, 512.0);
    table.set_coeff({1, 0, 0}, -1.0);
    for (const MultiIndex& a : multi_indices_up_to(3))
        if (a.order() == 3) table.set_coeff(a, spec.at(a) / multi_factorial(a));

    // recursion over odd orders; even orders stay zero because every
    // decomposition pairs an even-order coefficient
    for (int n = 5; n <= max_order; n += 2) {
        for (const MultiIndex& a : multi_indices_up_to(n)) {
            if (a.order() != n) continue;
            double sum = 0.0;
            const int t1 = a.a1 + 1, t2 = a.a2, t3 = a.a3;  // alpha + e1
            for (int b1 = 0; b1 <= t1; ++b1)
                for (int b2 = 0; b2 <= t2; ++b2)
                    for (int b3 = 0; b3 <= t3; ++b3) {
                        const MultiIndex beta{b1, b2, b3};
                        const MultiIndex gamma{t1 - b1, t2 - b2, t3 - b3};
                        if (gamma.a1 == 0) continue;
                        if (beta == a || gamma == a) continue;
                        if (beta.order() % 2 == 0 || gamma.order() % 2 == 0) continue;
                        if (beta.order() > n || gamma.order() > n) continue;
                        const double cb = table.coeff(beta);
                        if (cb == 0.0) continue;
                        const double cg = table.coeff(gamma);
                        if (cg == 0.0) continue;
                        sum += gamma.a1 * cb * cg;
                    }
            table.set_coeff(a, 2.0 / (3.0 - n) * sum);
        }
    }

    // growth constant: smallest power of two >= 512 certifying order 3
    const auto cat = catalan_numbers(3);
    double need = 0.0;
    for (const MultiIndex& a : multi_indices_up_to(3))
        if (a.order() == 3) {
            const double denom = cat[static_cast<std::size_t>(a.a1)] *
                                 cat[static_cast<std::size_t>(a.a2)] *
                                 cat[static_cast<std::size_t>(a.a3)];
            need = std::max(need, std::abs(table.coeff(a)) / denom);
        }
    double d = 512.0;
    while (d < need) d *= 2.0;
    CoeffTable out(max_order, d);
    for (const MultiIndex& a : out.indices()) out.set_coeff(a, table.coeff(a));
    return out;
}

CatalanReport certify_catalan(const CoeffTable& table) {
    const int n = table.max_order();
    const auto cat = catalan_numbers(n);
    CatalanReport rep;
    rep.per_order_max.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (const MultiIndex& a : table.indices()) {
        if (a.order() < 2) continue;
        const double denom = cat[static_cast<std::size_t>(a.a1)] *
                             cat[static_cast<std::size_t>(a.a2)] *
                             cat[static_cast<std::size_t>(a.a3)] *
                             std::pow(table.growth_d(), a.order() - 2);
        const double ratio = std::abs(table.coeff(a)) / denom;
        rep.per_order_max[static_cast<std::size_t>(a.order())] =
            std::max(rep.per_order_max[static_cast<std::size_t>(a.order())], ratio);
        if (ratio > rep.worst) {
            rep.worst = ratio;
            rep.worst_index = a;
        }
    }
    if (rep.worst > 1.0) {
        const MultiIndex a = *rep.worst_index;
        std::ostringstream msg;
        msg << "coefficient bound violated at alpha = (" << a.a1 << "," << a.a2 << "," << a.a3
            << "), ratio = " << fmt_g(rep.worst, 6);
        throw BoundViolated(msg.str());
    }
    return rep;
}

namespace {

// State (Phi1, Phi2, Phi3, W) along a characteristic of the stationary
// equation: dPhi/ds = (3/2 Phi1 + W, Phi2/2, Phi3/2), dW/ds = W/2.
using FlowState = std::array<double, 4>;

void flow_rhs(double, const FlowState& y, FlowState& dy) {
    dy[0] = 1.5 * y[0] + y[3];
    dy[1] = 0.5 * y[1];
    dy[2] = 0.5 * y[2];
    dy[3] = 0.5 * y[3];
}

double state_radius(const FlowState& y) {
    return std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
}

// Backward integration of the augmented flow from (y, w_start) until the
// shell |Phi| = delta. Returns the landing state; throws TrajectoryStall if
// the shell is not reached within the budget.
FlowState backtrack_to_shell(const Vec3& y, double w_start, double delta,
                             const TrajectoryOptions& opt, double& s_elapsed) {
    DormandPrince<4>::Options dp_opt;
    dp_opt.rel_tol = opt.rel_tol;
    dp_opt.abs_tol = 1e-14;
    dp_opt.max_step = opt.max_step;
    DormandPrince<4> dp(flow_rhs, dp_opt);

    FlowState st{y.x1, y.x2, y.x3, w_start};
    double s = 0.0;
    const double s_floor = -(2.0 * std::log(std::max(y.norm(), 2.0) / (0.25 * delta)) + 20.0);
    double h = 1e-3;
    std::size_t steps = 0;
    while (state_radius(st) > delta) {
        if (++steps > opt.max_steps || s <= s_floor)
            throw TrajectoryStall("backward flow failed to reach the shell");
        FlowState prev = st;
        const double s_prev = s;
        s = dp.step(s, st, s_floor, h);
        if (state_radius(st) <= delta) {
            // bisect the crossing time in (s, s_prev), re-integrating the
            // partial step from the pre-crossing state each trial
            double lo = s, hi = s_prev;  // radius(lo) <= delta < radius(hi)
            FlowState at_mid = st;
            double s_mid = s;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                FlowState trial = prev;
                double hh = h;
                double ss = s_prev;
                while (ss > mid + 1e-15) ss = dp.step(ss, trial, mid, hh);
                if (state_radius(trial) > delta) {
                    hi = mid;
                } else {
                    lo = mid;
                    at_mid = trial;
                    s_mid = ss;
                }
                if (hi - lo < 1e-13 * std::max(1.0, std::abs(s_prev))) break;
            }
            st = at_mid;
            s = s_mid;
            break;
        }
    }
    s_elapsed = -s;  // time spent flowing backwards
    return st;
}

// Algebraic seed using the closed-form trajectory: the forward flow from a
// shell point (y0, P(y0)) reaches
//   y1 = e^{3 sig/2} (y0_1 + P(y0)(1 - e^{-sig})),  y_check = e^{sig/2} y0_check,
// so sigma and the shell branch follow from a 1D root-find.
bool algebraic_seed(const CoeffTable& table, const Vec3& y, double delta, double& w_seed) {
    const double yc = y.check().norm();
    const double sig_min = yc > delta ? 2.0 * std::log(yc / delta) : 0.0;
    const double sig_max = sig_min + 2.0 * std::log(std::max(y.norm() / delta, 2.0)) + 30.0;

    auto residual = [&](double sig, int sign, bool& ok) {
        const double rad = delta * delta - yc * yc * std::exp(-sig);
        if (rad < 0.0) {
            ok = false;
            return 0.0;
        }
        ok = true;
        Vec3 y0{sign * std::sqrt(rad), y.x2 * std::exp(-0.5 * sig), y.x3 * std::exp(-0.5 * sig)};
        const double p = table.eval_unchecked(y0);
        return std::exp(1.5 * sig) * (y0.x1 + p * (1.0 - std::exp(-sig))) - y.x1;
    };

    for (int sign : {+1, -1}) {
        const int ngrid = 400;
        double prev_sig = 0.0, prev_r = 0.0;
        bool have_prev = false;
        for (int i = 0; i <= ngrid; ++i) {
            const double sig = sig_min + (sig_max - sig_min) * i / ngrid + 1e-14;
            bool ok = false;
            const double r = residual(sig, sign, ok);
            if (!ok) continue;
            if (have_prev && prev_r * r <= 0.0) {
                double lo = prev_sig, hi = sig, rlo = prev_r;
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    bool mok = false;
                    const double rm = residual(mid, sign, mok);
                    if (rlo * rm <= 0.0)
                        hi = mid;
                    else {
                        lo = mid;
                        rlo = rm;
                    }
                }
                const double sig_star = 0.5 * (lo + hi);
                const double rad = delta * delta - yc * yc * std::exp(-sig_star);
                Vec3 y0{sign * std::sqrt(std::max(0.0, rad)),
                        y.x2 * std::exp(-0.5 * sig_star), y.x3 * std::exp(-0.5 * sig_star)};
                w_seed = std::exp(0.5 * sig_star) * table.eval_unchecked(y0);
                return true;
            }
            prev_sig = sig;
            prev_r = r;
            have_prev = true;
        }
    }
    return false;
}

} // namespace

double extend_by_trajectory(const CoeffTable& table, const Vec3& y,
                            const TrajectoryOptions& opt_in) {
    TrajectoryOptions opt = opt_in;
    const double r0 = table.convergence_radius();
    if (opt.shell_radius <= 0.0) opt.shell_radius = 0.5 * r0;
    if (opt.shell_radius > 0.5 * r0)
        throw OutOfRadius("shell_radius exceeds r0/2");
    const double delta = opt.shell_radius;

    if (y.norm() <= delta * (1.0 + 1e-12)) return table.eval_unchecked(y);

    double w = 0.0;
    if (!algebraic_seed(table, y, delta, w)) w = -y.x1;  // crude fallback seed

    // shooting correction: the landing value must match the series
    auto mismatch = [&](double w_trial) {
        double s_elapsed = 0.0;
        const FlowState land = backtrack_to_shell(y, w_trial, delta, opt, s_elapsed);
        const Vec3 yl{land[0], land[1], land[2]};
        return land[3] - table.eval_unchecked(yl);
    };

    double w0 = w, f0 = mismatch(w0);
    if (std::abs(f0) > 1e-13 * std::max(1.0, std::abs(w0))) {
        double w1 = w0 * (1.0 + 1e-6) + 1e-9, f1 = mismatch(w1);
        for (int it = 0; it < 30; ++it) {
            if (std::abs(f1 - f0) < 1e-300) break;
            const double w2 = w1 - f1 * (w1 - w0) / (f1 - f0);
            w0 = w1;
            f0 = f1;
            w1 = w2;
            f1 = mismatch(w1);
            if (std::abs(f1) <= 1e-13 * std::max(1.0, std::abs(w1))) break;
        }
        w = w1;
    } else {
        w = w0;
    }
    return w;
}

double largest_valid_shell(const CoeffTable& table, int samples_per_shell) {
    double delta = 0.5 * table.convergence_radius();
    for (int halvings = 0; halvings < 40; ++halvings) {
        bool ok = true;
        for (int i = 0; i < samples_per_shell && ok; ++i) {
            Vec3 dir = halton_cube(static_cast<std::uint64_t>(i), 1.0);
            const double n = dir.norm();
            if (n < 1e-12) continue;
            const Vec3 p = dir * (delta / n);
            const Vec3 g = table.grad_unchecked(p);
            if (!(g.x1 > -1.0 && g.x1 < -0.5)) ok = false;
            const double w = table.eval_unchecked(p);
            const double flux =
                p.x1 * (1.5 * p.x1 + w) + 0.5 * p.x2 * p.x2 + 0.5 * p.x3 * p.x3;
            if (!(flux >= p.norm2() / 3.0)) ok = false;
        }
        if (ok) return delta;
        delta *= 0.5;
    }
    return delta;
}

void serialize(std::ostream& os, const CoeffTable& table) {
    os << "# order=" << table.max_order() << " D=" << fmt_g17(table.growth_d()) << "\n";
    for (const MultiIndex& a : table.indices())
        os << a.a1 << ' ' << a.a2 << ' ' << a.a3 << ' ' << fmt_g17(table.coeff(a)) << "\n";
}

CoeffTable deserialize(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw SimError("empty coefficient table stream");
    int order = -1;
    double d = 0.0;
    if (std::sscanf(line.c_str(), "# order=%d D=%lf", &order, &d) != 2)
        throw SimError("malformed coefficient table header: " + line);
    CoeffTable table(order, d);
    MultiIndex a;
    double c;
    while (is >> a.a1 >> a.a2 >> a.a3 >> c) table.set_coeff(a, c);
    return table;
}

} // namespace shocksim::family
