#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shocksim/config.hpp"
#include "shocksim/diagnostics.hpp"
#include "shocksim/fields.hpp"
#include "shocksim/modulation.hpp"

namespace shocksim {

/// Everything a simulation run produces, kept in memory so tests can assert
/// on it directly; the CLI serializes the same structure to files.
struct RunArtifacts {
    diag::ModHistory history;
    std::vector<std::pair<double, double>> d1w0_history;     // (s, d1 W(0,s))
    std::vector<std::pair<double, double>> w0_history;       // (s, W(0,s))
    std::vector<std::pair<double, double>> cross_hess_history;  // (s, max |grad^2 W(0)|)
    std::vector<std::pair<double, double>> checkgrad_history;   // (s, |check-grad W(0)|)
    std::vector<std::pair<double, double>> wbar_err_history;    // (s, sup |W - bar_w|)
    std::vector<Vec3> wbar_err_argmax;                          // where the sup sits
    std::vector<std::pair<double, double>> h0_min_eig_history;  // (s, min eig of H0)
    std::vector<std::array<double, 4>> ek_history;              // s, E_1..E_3
    std::vector<std::pair<double, diag::MonitorReport>> monitors;
    std::vector<std::pair<double, diag::VorticityReport>> vorticity;
    std::optional<diag::BlowupReport> blowup;
    std::vector<double> holder_r, holder_dw;

    FieldState final_state;
    modulation::ModulationState final_mod;
    std::vector<FieldState> snapshots;  // retained for 1D runs
    std::vector<diag::ModSample> snapshot_mods;

    int monitor_violations = 0;
};

/// Core evolution loop shared by the burgers-1d / burgers-3d / euler-3d
/// modes. Does not touch the filesystem.
RunArtifacts run_evolution(const RunConfig& cfg);

/// Full CLI-facing run: dispatches on mode, writes the artifact files under
/// cfg.out_dir. Returns 0 on success (throws on error).
int run(const RunConfig& cfg);

} // namespace shocksim
