#pragma once

#include <string>
#include <vector>

#include "shocksim/vec.hpp"

namespace shocksim::datagen {

/// Compactly supported C-infinity bump, planted in the scaled coordinates
/// yhat = (eps^{-3/2} xt1, eps^{-1/2} xt_check). Centers exclude the origin
/// ball so every derivative vanishes at 0 exactly.
struct Bump {
    int field = 0;  // 0 = w, 1 = z, 2 = a2, 3 = a3
    double amp = 0.0;  // w: self-similar amplitude; z/a: physical amplitude
    Vec3 center;
    Vec3 radius{1.0, 1.0, 1.0};
};

struct PerturbationSpec {
    std::vector<Bump> bumps;
    Sym2 origin_hess;   // transverse Hessian of w_tilde at 0, physical units
    unsigned seed = 0;
    int random_bumps = 0;  // drawn admissibly from the seeded RNG
};

struct DataOptions {
    bool one_dimensional = false;
    /// taper the profile seed to compact support in X0 (euler runs);
    /// off for profile-stability runs initialized directly from bar_w
    bool profile_taper = true;
};

/// Initial data as analytic closures in the x-tilde frame, plus the derived
/// modulation seeds. All field evaluation goes through the scaled chart.
class InitialData {
public:
    double epsilon = 0.01;
    double kappa0 = 20.0;
    double alpha = 1.0;
    Sym2 phi0;
    PerturbationSpec perturbation;
    DataOptions options;

    // taper knobs (scaled units), fixed by make_initial_data
    double taper1_in = 0.0, taper1_out = 0.0;
    double taperc_in = 0.0, taperc_out = 0.0;

    /// scaled chart: yhat(xt) = (eps^{-3/2} xt1, eps^{-1/2} xt_check)
    Vec3 scaled(const Vec3& xt) const;

    double w_tilde(const Vec3& xt) const;
    double z_tilde(const Vec3& xt) const;
    Vec2 a_tilde(const Vec3& xt) const;

    /// deviation from the rescaled profile: w_tilde - bar_w_eps (+kappa0 off)
    double w_deviation(const Vec3& xt) const;

    double f0(const Vec2& xc) const { return 0.5 * xc.dot(phi0 * xc); }

    /// fields of the sheared x frame
    double w0(const Vec3& x) const;
    double z0(const Vec3& x) const;
    Vec2 a0(const Vec3& x) const;

    /// self-similar initialization at s0 = -log(epsilon)
    void ss_fields(const Vec3& y, double& W, double& Z, double& A2, double& A3) const;

    double s0() const;
};

/// Constructs the tapered profile seed plus perturbations and validates the
/// perturbation amplitudes. Throws KappaTooSmall / PerturbationTooLarge.
InitialData make_initial_data(double epsilon, double kappa0, double alpha,
                              const PerturbationSpec& pert, const DataOptions& opt = {});

struct CheckRow {
    std::string name;
    bool pass = true;
    double bound = 0.0;
    double measured = 0.0;
    double margin = 0.0;  // (bound - measured)/bound at the worst sample
    Vec3 worst;           // scaled location of the worst sample
};

struct ValidationReport {
    std::vector<CheckRow> checks;
    bool all_pass = true;
    const CheckRow* find(const std::string& name) const;
};

/// Samples every inequality of the admissible-data hypotheses; never throws
/// on failures — the report lists them.
ValidationReport validate_initial_data(const InitialData& data, int k_sobolev);

} // namespace shocksim::datagen
