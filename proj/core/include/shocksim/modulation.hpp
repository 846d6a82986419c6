#pragma once

#include <functional>

#include "shocksim/coords.hpp"
#include "shocksim/fields.hpp"
#include "shocksim/vec.hpp"

namespace shocksim::modulation {

/// Time derivatives of the ten modulation parameters (d/dt in rescaled
/// physical time).
struct Rates {
    double kappa_dot = 0.0;
    double tau_dot = 0.0;
    Vec3 xi_dot;
    Vec2 n_dot;
    Sym2 phi_dot;
};

/// The ten dynamic parameters kappa, tau, xi, n_check, phi plus their
/// current rates and the rescaled physical time t.
struct ModulationState {
    double kappa = 0.0;
    double tau = 0.0;
    Vec3 xi;
    Vec2 n_check;
    Sym2 phi;
    Rates rates;
    double t = 0.0;

    double beta_tau() const { return 1.0 / (1.0 - rates.tau_dot); }
};

/// Derivatives of a grid scalar at the origin node, through third order.
struct ScalarJet {
    double val = 0.0;
    Vec3 grad;
    Sym3 hess;
    Sym3Tensor third;
};

struct OriginJet {
    ScalarJet W, Z, A2, A3;
};

/// 4th-order centered differences of all fields at y = 0. Requires the
/// origin to sit at least 5 cells from every non-degenerate boundary.
OriginJet origin_jet(const FieldState& state);

/// Stencil spacing multiple used by origin_jet (and the forcing patch).
int origin_stencil_stride(const Grid3& grid);

/// (H^0)^{-1} with H^0 = (d1 grad^2 W)(0). Throws HessianDegenerate when
/// |det H^0| < 1e-6 or the inverse has operator norm > 1.
Mat3 hessian_inverse(const OriginJet& jet);

/// Forcing data at the origin: F_W(0), its gradient and Hessian, obtained
/// by finite differences of the assembled forcing field. The provider is
/// re-invoked inside the Picard iteration with trial rates.
struct ForcingJet {
    double val = 0.0;
    Vec3 grad;
    Sym3 hess;
};
using ForcingProvider = std::function<ForcingJet(const ModulationState& trial)>;

struct PicardOptions {
    double tol = 1e-12;
    int max_iters = 50;
    /// restoring rate applied to the measured constraint residuals; the
    /// correction terms vanish identically when the constraints hold, so
    /// the zero-residual rates are untouched. 0 disables.
    double feedback = 2.0;
};

/// Solves the coupled implicit constraint system for the parameter rates.
/// Reduces to kappa_dot = tau_dot = 0, xi_dot = kappa/(2 beta1) e1 in the
/// pure Burgers configuration. Throws PicardDiverged / HessianDegenerate.
Rates modulation_rhs(const OriginJet& jet, const ModulationState& mod, double s, double alpha,
                     const ForcingProvider& forcing, const PicardOptions& opt = {});

/// Forward update over a (rescaled physical) time increment dt; exact for
/// rates constant on the step. Refreshes beta_tau via the stored rates.
/// Throws BlowupReached when tau - t <= 0 after the step.
ModulationState advance_modulation(const ModulationState& mod, const Rates& rates, double dt);

} // namespace shocksim::modulation
