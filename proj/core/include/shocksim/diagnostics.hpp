#pragma once

#include <string>
#include <utility>
#include <vector>

#include "shocksim/fields.hpp"
#include "shocksim/modulation.hpp"
#include "shocksim/solver.hpp"

namespace shocksim::diag {

using modulation::ModulationState;

/// One accepted step of the modulation history.
struct ModSample {
    double t = 0.0, s = 0.0;
    double kappa = 0.0, tau = 0.0;
    Vec3 xi;
    Vec2 n_check;
    Sym2 phi;
    modulation::Rates rates;
};
using ModHistory = std::vector<ModSample>;

struct BlowupReport {
    double T_star = 0.0;
    Vec3 xi_star;
    double kappa_star = 0.0;
    double rate_deviation = 0.0;
    double holder_exponent = 0.0;
    std::pair<double, double> holder_ci{0.0, 0.0};
};

/// T* from the secant solve of tau(t) = t on the interpolated history
/// (linear extrapolation past the last sample); xi*, kappa* by evaluation
/// at T*. Throws NoBlowupInWindow unless tau - t reached stop_threshold.
BlowupReport blowup_from_history(const ModHistory& history, double epsilon,
                                 double stop_threshold);

/// max |(tau - t) e^s d1W(0,s) + 1| over the history of origin slopes;
/// by the coordinate identities this equals the constraint residual.
double rate_check(const std::vector<std::pair<double, double>>& s_and_d1w0);

struct HolderFit {
    double exponent = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;
};

/// Least-squares slope of log|dw| vs log r with a bootstrap-resampled
/// confidence interval. Throws InsufficientRange for fewer than 6 scales.
HolderFit holder_fit(const std::vector<double>& r, const std::vector<double>& dw,
                     unsigned bootstrap_seed = 7, int resamples = 400);

struct MonitorParams {
    double M = 10.0;
    double epsilon = 0.01;
    double ell = 0.0;     // 0: derive (log M)^{-5}
    double L = 0.0;       // 0: derive eps^{-1/10}
    double kappa0 = 20.0;
};

struct MonitorRow {
    double s = 0.0;
    std::string inequality;
    Vec3 location;
    double bound = 0.0;
    double measured = 0.0;
    double margin = 0.0;
};

struct MonitorReport {
    std::vector<MonitorRow> rows;  // worst row per inequality at this s
    int violations = 0;
};

/// Pointwise evaluation of the a-priori inequality set on the current state
/// plus the modulation-scale bounds; logs margins, never aborts.
MonitorReport bootstrap_monitor(const FieldState& state, const ModulationState& mod,
                                double alpha, const MonitorParams& params);

/// Modified homogeneous-norm: sum over |gamma| = k of lambda^{|gamma_check|}
/// (||d^gamma U||^2 + ||d^gamma S||^2), lambda = delta^2/(12 k^2); centered
/// differences and trapezoid quadrature.
double ek_norm(const std::vector<Field>& U, const Field& S, const Grid3& grid, int k,
               double delta);

/// (U, S) arrays from the Riemann fields.
void us_fields(const FieldState& state, const ModulationState& mod,
               const solver::FrameTable& frames, std::vector<Field>& U, Field& S);

struct VorticityReport {
    double identity_residual = 0.0;     // Lemma-style d1A identities, max over grid core
    double sound_deviation = 0.0;       // ||S - kappa0/2||_inf
    double omega_max = 0.0;             // ||Omega||_inf
    Vec3 worst_identity_at;
};

VorticityReport vorticity_checks(const FieldState& state, const ModulationState& mod,
                                 double alpha, const solver::FrameTable& frames,
                                 double kappa0);

} // namespace shocksim::diag
