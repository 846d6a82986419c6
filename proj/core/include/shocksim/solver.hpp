#pragma once

#include <memory>
#include <vector>

#include "shocksim/coords.hpp"
#include "shocksim/fields.hpp"
#include "shocksim/modulation.hpp"

namespace shocksim::solver {

using modulation::ModulationState;

/// Frames and their x-check derivatives/time rates over the transverse
/// plane of the grid, evaluated at x_check = e^{-s/2} y_check.
struct FrameTable {
    std::vector<coords::Frame> fr;        // n2*n3 entries
    std::vector<coords::FrameDerivs> der;
    std::vector<coords::FrameRates> rate;

    const coords::Frame& at(const Grid3& g, int j, int k) const {
        return fr[static_cast<std::size_t>(j) * static_cast<std::size_t>(g.n3) +
                  static_cast<std::size_t>(k)];
    }
};

FrameTable build_frames(const Grid3& grid, double s, const ModulationState& mod);

/// Velocity residuals per family plus the modulation drift V.
struct TransportField {
    Field gW, gZ, gU;
    Field hW2, hW3, hZ2, hZ3, hU2, hU3;
    Field V1, V2, V3;
};

TransportField assemble_transport(const FieldState& state, const ModulationState& mod,
                                  double alpha, const FrameTable& frames);

/// Forcing arrays F_W, F_Z, F_A2, F_A3 (without the kappa_dot source, which
/// the stepper adds). Zero in Burgers mode (state.has_za == false).
struct ForcingField {
    Field FW, FZ, FA2, FA3;
};

ForcingField assemble_forcing(const FieldState& state, const ModulationState& mod, double alpha,
                              const FrameTable& frames);

/// Forcing jet at the origin for the modulation system, by 4th-order finite
/// differences of F_W assembled on a local stencil patch with trial rates.
modulation::ForcingJet forcing_origin_jet(const FieldState& state, const ModulationState& trial,
                                          double alpha);

struct StepOptions {
    double ds = 0.01;
    double ds_max = 0.05;
    /// half-step velocity residuals and forcing for the corrector pass of
    /// the iterated scheme; the predictor pass leaves these null and runs
    /// with the start-of-step fields
    const TransportField* transport_half = nullptr;
    const ForcingField* forcing_half = nullptr;
};

/// One semi-Lagrangian step of the modulated self-similar system: midpoint
/// backtracking along V_W / V_Z / V_U, tricubic interpolation at departure
/// points, exact e^{ds/2} amplification of W, midpoint forcing quadrature.
/// Throws CFLAccuracy when a backtrack displacement exceeds 3 cells and
/// NonFinite on overflow. `forcing` may be null for pure transport.
FieldState step_ss(const FieldState& state, const ModulationState& mod, double alpha,
                   const FrameTable& frames, const TransportField& transport,
                   const ForcingField* forcing, const StepOptions& opt);

enum class Flow { W, Z, U };

/// Velocity provider for Lagrangian tracing.
class TransportProvider {
public:
    virtual ~TransportProvider() = default;
    virtual Vec3 velocity(Flow which, const Vec3& y, double s) const = 0;
    virtual bool in_domain(const Vec3& y) const { (void)y; return true; }
};

/// Steady Burgers configuration: W = bar_w, Z = A = 0, phi = n = 0,
/// constant kappa with xi_dot = kappa/(2 beta1) e1, tau_dot = 0.
class AnalyticBurgersProvider : public TransportProvider {
public:
    AnalyticBurgersProvider(double kappa0, double alpha)
        : kappa_(kappa0), betas_(coords::Betas::from_alpha(alpha)) {}
    Vec3 velocity(Flow which, const Vec3& y, double s) const override;

private:
    double kappa_;
    coords::Betas betas_;
};

/// Transport interpolated from one assembled state; the residuals g, h are
/// frozen at the state's time (short traces and support diagnostics).
class FrozenGridProvider : public TransportProvider {
public:
    FrozenGridProvider(const FieldState& state, const TransportField& transport)
        : grid_(state.grid), tr_(transport) {}
    Vec3 velocity(Flow which, const Vec3& y, double s) const override;
    bool in_domain(const Vec3& y) const override { return grid_.contains(y); }

private:
    Grid3 grid_;
    const TransportField& tr_;
};

struct TrajectoryPoint {
    double s = 0.0;
    Vec3 y;
};

struct TrajectoryPath {
    std::vector<TrajectoryPoint> pts;
    bool left_domain = false;
};

struct TraceOptions {
    double rel_tol = 1e-10;
    double sample_ds = 0.05;
    std::size_t max_steps = 200000;
};

/// Integrates dPhi/ds = V(Phi, s) from (y0, s0) to s1, sampling the path.
/// Truncates with left_domain = true when the provider's domain is exited.
TrajectoryPath trace_trajectory(Flow which, const Vec3& y0, double s0, double s1,
                                const TransportProvider& provider, const TraceOptions& opt = {});

} // namespace shocksim::solver
