#pragma once

#include <string>
#include <vector>

#include "shocksim/datagen.hpp"
#include "shocksim/vec.hpp"

namespace shocksim {

enum class RunMode { ProfileTable, Family, Burgers1D, Burgers3D, Euler3D, ValidateIC };

/// Run configuration parsed from a `key = value` sectioned text file.
/// Unknown keys are rejected.
struct RunConfig {
    RunMode mode = RunMode::ProfileTable;

    // physics
    double epsilon = 0.01;
    double kappa0 = 20.0;
    double alpha = 1.0;

    // grid
    int n1 = 129, n2 = 65, n3 = 65;
    Vec3 extent{8.0, 4.0, 4.0};

    // time stepping and stop criteria
    double ds = 0.01;
    double s_max = 0.0;          // 0: unused
    double tau_t_floor = 0.0;    // 0: unused

    // output
    std::string out_dir = "out";
    std::string snapshot_format = "csv";  // csv | binary
    double snapshot_every = 0.5;          // in s; 0 disables
    double monitor_every = 0.5;           // in s; 0 disables
    bool quiet = false;

    // constraint-feedback restoring rate (0 disables)
    double feedback = 2.0;

    // monitor parameters
    double M = 10.0;
    double ell = 0.0;    // 0: (log M)^{-5}
    double L = 0.0;      // 0: eps^{-1/10}
    double delta = 1.0 / 32.0;
    int k_energy = 3;

    // datagen
    datagen::PerturbationSpec perturbation;
    bool profile_taper = true;

    // family mode
    int family_order = 15;

    /// canonical text used for the artifact config hash
    std::string canonical;

    double s0() const;
    double stop_s() const;
};

RunConfig parse_config_file(const std::string& path,
                            const std::vector<std::string>& overrides);
RunConfig parse_config_text(const std::string& text,
                            const std::vector<std::string>& overrides);

std::string mode_name(RunMode m);

} // namespace shocksim
