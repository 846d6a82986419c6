#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>

#include "shocksim/errors.hpp"

namespace shocksim {

/// Adaptive Dormand-Prince 5(4) embedded pair on a fixed-size state.
/// The driver advances one accepted step at a time so callers can locate
/// events (shell crossings, domain exits) themselves.
template <std::size_t N>
class DormandPrince {
public:
    using State = std::array<double, N>;
    using Rhs = std::function<void(double s, const State& y, State& dy)>;

    struct Options {
        double rel_tol = 1e-10;
        double abs_tol = 1e-12;
        double max_step = 1.0;
        double initial_step = 1e-3;
        std::size_t max_steps = 200000;
    };

    DormandPrince(Rhs rhs, Options opt) : rhs_(std::move(rhs)), opt_(opt) {}

    /// One accepted step from (s, y), not exceeding s_end. Returns the new s.
    /// `h_hint` is updated with the proposed next step size.
    double step(double s, State& y, double s_end, double& h_hint) {
        const double dir = (s_end >= s) ? 1.0 : -1.0;
        double h = h_hint > 0.0 ? h_hint : opt_.initial_step;
        h = std::min(h, opt_.max_step);
        for (std::size_t attempt = 0; attempt < 64; ++attempt) {
            h = std::min(h, std::abs(s_end - s));
            if (h <= 0.0) return s_end;
            State y5;
            const double err = try_step(s, y, dir * h, y5);
            if (err <= 1.0) {
                const double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
                h_hint = std::min(opt_.max_step, h * std::min(5.0, std::max(0.2, grow)));
                y = y5;
                return s + dir * h;
            }
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
        throw TrajectoryStall("step size underflow in Dormand-Prince driver");
    }

private:
    // Error estimate normalised so err <= 1 means acceptable.
    double try_step(double s, const State& y, double h, State& y5) {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        State k1, k2, k3, k4, k5, k6, k7, tmp;
        rhs_(s, y, k1);
        comb1(tmp, y, h, k1, a21);
        rhs_(s + c2 * h, tmp, k2);
        comb2(tmp, y, h, k1, a31, k2, a32);
        rhs_(s + c3 * h, tmp, k3);
        comb3(tmp, y, h, k1, a41, k2, a42, k3, a43);
        rhs_(s + c4 * h, tmp, k4);
        comb4(tmp, y, h, k1, a51, k2, a52, k3, a53, k4, a54);
        rhs_(s + c5 * h, tmp, k5);
        comb5(tmp, y, h, k1, a61, k2, a62, k3, a63, k4, a64, k5, a65);
        rhs_(s + h, tmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs_(s + h, y5, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                  e6 * k6[i] + e7 * k7[i]);
            const double sc =
                opt_.abs_tol + opt_.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(e) / sc);
        }
        if (!std::isfinite(err)) err = 1e10;
        return err;
    }

    static void comb1(State& out, const State& y, double h, const State& k1, double a1) {
        for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * a1 * k1[i];
    }
    static void comb2(State& out, const State& y, double h, const State& k1, double a1,
                      const State& k2, double a2) {
        for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * (a1 * k1[i] + a2 * k2[i]);
    }
    static void comb3(State& out, const State& y, double h, const State& k1, double a1,
                      const State& k2, double a2, const State& k3, double a3) {
        for (std::size_t i = 0; i < N; ++i)
            out[i] = y[i] + h * (a1 * k1[i] + a2 * k2[i] + a3 * k3[i]);
    }
    static void comb4(State& out, const State& y, double h, const State& k1, double a1,
                      const State& k2, double a2, const State& k3, double a3, const State& k4,
                      double a4) {
        for (std::size_t i = 0; i < N; ++i)
            out[i] = y[i] + h * (a1 * k1[i] + a2 * k2[i] + a3 * k3[i] + a4 * k4[i]);
    }
    static void comb5(State& out, const State& y, double h, const State& k1, double a1,
                      const State& k2, double a2, const State& k3, double a3, const State& k4,
                      double a4, const State& k5, double a5) {
        for (std::size_t i = 0; i < N; ++i)
            out[i] = y[i] + h * (a1 * k1[i] + a2 * k2[i] + a3 * k3[i] + a4 * k4[i] + a5 * k5[i]);
    }

    Rhs rhs_;
    Options opt_;
};

} // namespace shocksim
