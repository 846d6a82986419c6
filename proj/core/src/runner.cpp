#include "shocksim/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "shocksim/errors.hpp"
#include "shocksim/family.hpp"
#include "shocksim/profiles.hpp"
#include "shocksim/snapshot.hpp"
#include "shocksim/solver.hpp"
#include "shocksim/textio.hpp"
#include "shocksim/version.hpp"

namespace shocksim {

namespace {

using modulation::ModulationState;
using modulation::Rates;

void init_fields(FieldState& state, const datagen::InitialData& data) {
    const Grid3& g = state.grid;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            for (int k = 0; k < g.n3; ++k) {
                const std::size_t id = g.index(i, j, k);
                double W, Z, A2, A3;
                data.ss_fields(g.node(i, j, k), W, Z, A2, A3);
                state.W[id] = W;
                if (state.has_za) {
                    state.Z[id] = Z;
                    state.A2[id] = A2;
                    state.A3[id] = A3;
                }
            }
}

diag::ModSample sample_of(const ModulationState& mod, double s) {
    diag::ModSample m;
    m.t = mod.t;
    m.s = s;
    m.kappa = mod.kappa;
    m.tau = mod.tau;
    m.xi = mod.xi;
    m.n_check = mod.n_check;
    m.phi = mod.phi;
    m.rates = mod.rates;
    return m;
}

// offset-sampled section through the blow-up point assembled from retained
// snapshots: each dyadic physical offset r is read off the snapshot whose
// rescaling puts it in the well-resolved band of the grid, in the co-moving
// frame, with one characteristic correction for the local wave speed
void assemble_holder_section(const RunConfig& cfg, RunArtifacts& art) {
    if (art.snapshots.empty() || !art.blowup) return;
    const double kappa_star = art.blowup->kappa_star;
    const double T_star = art.blowup->T_star;
    const double Y = cfg.extent.x1;

    const double r_max = 0.25 * Y * std::exp(-1.5 * art.snapshots.front().s);
    const double r_min = 0.3 * Y * std::exp(-1.5 * art.snapshots.back().s);
    for (double r = r_max; r >= r_min; r *= 0.5) {
        // pick the snapshot whose scale puts r into |y| around 3Y/8
        int best = -1;
        double best_score = 1e300;
        for (std::size_t q = 0; q < art.snapshots.size(); ++q) {
            const double y_r = r * std::exp(1.5 * art.snapshots[q].s);
            if (y_r < 0.2 * Y || y_r > 0.55 * Y) continue;
            const double score = std::abs(y_r - 0.375 * Y);
            if (score < best_score) {
                best_score = score;
                best = static_cast<int>(q);
            }
        }
        if (best < 0) continue;
        const FieldState& snap = art.snapshots[static_cast<std::size_t>(best)];
        const diag::ModSample& ms = art.snapshot_mods[static_cast<std::size_t>(best)];
        auto w_at = [&](double x_off) {
            const double y_eval = x_off * std::exp(1.5 * snap.s);
            const double Wv =
                sample(snap.W, snap.grid, {y_eval, 0.0, 0.0}, Extension::ClampedLinear);
            return std::exp(-0.5 * snap.s) * Wv + ms.kappa;
        };
        // the characteristic reaching (xi* + r, T*) sits at co-moving offset
        // r - (w - kappa)(T* - t) at the snapshot time
        double w = w_at(r);
        w = w_at(r - (w - ms.kappa) * (T_star - ms.t));
        if (std::abs((r - 0.0) * std::exp(1.5 * snap.s)) > 0.9 * Y) continue;
        art.holder_r.push_back(r);
        art.holder_dw.push_back(w - kappa_star);
    }
}

} // namespace

RunArtifacts run_evolution(const RunConfig& cfg_in) {
    RunConfig cfg = cfg_in;
    const bool euler = cfg.mode == RunMode::Euler3D;
    const bool dim1 = cfg.mode == RunMode::Burgers1D;
    if (dim1) {
        cfg.n2 = cfg.n3 = 1;
        cfg.extent.x2 = cfg.extent.x3 = 0.0;
    }

    datagen::DataOptions opt;
    opt.one_dimensional = dim1;
    opt.profile_taper = euler ? true : cfg.profile_taper;
    const datagen::InitialData data =
        datagen::make_initial_data(cfg.epsilon, cfg.kappa0, cfg.alpha, cfg.perturbation, opt);

    Grid3 grid(cfg.n1, cfg.n2, cfg.n3, cfg.extent);
    FieldState state(grid, data.s0(), euler);
    init_fields(state, data);

    ModulationState mod;
    mod.kappa = cfg.kappa0;
    mod.tau = 0.0;
    mod.t = -cfg.epsilon;
    mod.phi = data.phi0;

    const double alpha = cfg.alpha;
    auto provider = [&state, alpha](const ModulationState& trial) {
        return solver::forcing_origin_jet(state, trial, alpha);
    };
    modulation::PicardOptions picard;
    picard.feedback = cfg.feedback;

    // profile values for the stability monitor
    Field wbar_nodes(grid.size(), 0.0);
    for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j < grid.n2; ++j)
            for (int k = 0; k < grid.n3; ++k)
                wbar_nodes[grid.index(i, j, k)] = profiles::bar_w(grid.node(i, j, k));

    RunArtifacts art;
    const double stop = cfg.stop_s();
    double next_monitor = state.s;
    double next_snapshot = state.s;

    solver::ForcingField forcing;

    diag::MonitorParams mon;
    mon.M = cfg.M;
    mon.epsilon = cfg.epsilon;
    mon.L = cfg.L;
    mon.ell = cfg.ell;
    mon.kappa0 = cfg.kappa0;

    auto record_cadence = [&](const ModulationState& m) {
        if (cfg.monitor_every > 0.0 && state.s >= next_monitor - 1e-12) {
            next_monitor += cfg.monitor_every;
            const solver::FrameTable frames = solver::build_frames(grid, state.s, m);
            diag::MonitorReport rep = diag::bootstrap_monitor(state, m, alpha, mon);
            art.monitor_violations += rep.violations;
            art.monitors.emplace_back(state.s, std::move(rep));
            if (euler) {
                art.vorticity.emplace_back(
                    state.s, diag::vorticity_checks(state, m, alpha, frames, cfg.kappa0));
                std::vector<Field> U;
                Field S;
                diag::us_fields(state, m, frames, U, S);
                std::array<double, 4> ek{state.s, 0, 0, 0};
                for (int k = 1; k <= std::min(3, cfg.k_energy); ++k)
                    ek[static_cast<std::size_t>(k)] =
                        diag::ek_norm(U, S, grid, k, cfg.delta);
                art.ek_history.push_back(ek);
            }
            double werr = 0.0;
            Vec3 argmax;
            for (int i = 0; i < grid.n1; ++i)
                for (int j = 0; j < grid.n2; ++j)
                    for (int k = 0; k < grid.n3; ++k) {
                        const std::size_t id = grid.index(i, j, k);
                        const double e = std::abs(state.W[id] - wbar_nodes[id]);
                        if (e > werr) {
                            werr = e;
                            argmax = grid.node(i, j, k);
                        }
                    }
            art.wbar_err_history.emplace_back(state.s, werr);
            art.wbar_err_argmax.push_back(argmax);
        }
        if (cfg.snapshot_every > 0.0 && state.s >= next_snapshot - 1e-12) {
            next_snapshot += cfg.snapshot_every;
            if (dim1) {
                art.snapshots.push_back(state);
                art.snapshot_mods.push_back(sample_of(m, state.s));
            }
        }
    };

    // initial rates from the constraint system
    {
        const modulation::OriginJet jet = modulation::origin_jet(state);
        mod.rates = modulation::modulation_rhs(jet, mod, state.s, alpha, provider, picard);
    }
    art.history.push_back(sample_of(mod, state.s));
    record_cadence(mod);

    while (state.s < stop - 1e-12) {
        const double s = state.s;

        const modulation::OriginJet jet = modulation::origin_jet(state);
        art.d1w0_history.emplace_back(s, jet.W.grad.x1);
        art.w0_history.emplace_back(s, jet.W.val);
        art.checkgrad_history.emplace_back(s, std::hypot(jet.W.grad.x2, jet.W.grad.x3));
        art.cross_hess_history.emplace_back(s, jet.W.hess.max_abs());
        {
            Sym3 h0;
            for (int a = 0; a < 3; ++a)
                for (int b = a; b < 3; ++b) h0(a, b) = jet.W.third(0, a, b);
            for (int a = 1; a < 3; ++a)
                if (h0(a, a) == 0.0) h0(a, a) = 2.0;
            art.h0_min_eig_history.emplace_back(s, sym3_eigenvalues(h0)[0]);
        }

        Rates rates = modulation::modulation_rhs(jet, mod, s, alpha, provider, picard);

        ModulationState mod_step = mod;
        mod_step.rates = rates;

        const solver::FrameTable frames = solver::build_frames(grid, s, mod_step);
        const solver::TransportField transport =
            solver::assemble_transport(state, mod_step, alpha, frames);
        if (euler) forcing = solver::assemble_forcing(state, mod_step, alpha, frames);

        // displacement-limited step: keep every backtrack within 2.5 cells
        double ds = std::min(cfg.ds, stop - state.s);
        {
            double cap = 1e300;
            auto limit = [&](const Field& gf, const Field& h2f, const Field& h3f) {
                double v1 = 0.0, v2 = 0.0, v3 = 0.0;
                for (int i = 0; i < grid.n1; ++i)
                    for (int j = 0; j < grid.n2; ++j)
                        for (int k = 0; k < grid.n3; ++k) {
                            const std::size_t id = grid.index(i, j, k);
                            const Vec3 y = grid.node(i, j, k);
                            v1 = std::max(v1, std::abs(gf[id] + 1.5 * y.x1));
                            if (grid.n2 > 1)
                                v2 = std::max(v2, std::abs(h2f[id] + 0.5 * y.x2));
                            if (grid.n3 > 1)
                                v3 = std::max(v3, std::abs(h3f[id] + 0.5 * y.x3));
                        }
                if (v1 > 0.0) cap = std::min(cap, 2.5 * grid.h(0) / v1);
                if (grid.n2 > 1 && v2 > 0.0) cap = std::min(cap, 2.5 * grid.h(1) / v2);
                if (grid.n3 > 1 && v3 > 0.0) cap = std::min(cap, 2.5 * grid.h(2) / v3);
            };
            limit(transport.gW, transport.hW2, transport.hW3);
            if (euler) {
                limit(transport.gZ, transport.hZ2, transport.hZ3);
                limit(transport.gU, transport.hU2, transport.hU3);
            }
            ds = std::max(1e-6, std::min(ds, cap));
        }

        // midpoint refresh of the rates over the half step
        {
            const double bt = 1.0 / (1.0 - rates.tau_dot);
            const double dt_half = bt * std::exp(-s) * (1.0 - std::exp(-0.5 * ds));
            ModulationState half = modulation::advance_modulation(mod, rates, dt_half);
            rates = modulation::modulation_rhs(jet, half, s, alpha, provider, picard);
            mod_step.rates = rates;
        }
        const double beta_tau = 1.0 / (1.0 - rates.tau_dot);
        const double dt = beta_tau * std::exp(-s) * (1.0 - std::exp(-ds));

        solver::StepOptions sopt;
        sopt.ds = ds;
        sopt.ds_max = std::max(cfg.ds, ds);

        // iterated step: predict with start-of-step velocities, reassemble
        // at s + ds from the predicted fields, correct with the average
        const ModulationState mod_next = modulation::advance_modulation(mod, rates, dt);
        {
            FieldState pred = solver::step_ss(state, mod_step, alpha, frames, transport,
                                              euler ? &forcing : nullptr, sopt);
            ModulationState mod_next_r = mod_next;
            mod_next_r.rates = rates;
            const solver::FrameTable frames_next =
                solver::build_frames(grid, pred.s, mod_next_r);
            const solver::TransportField transport_next =
                solver::assemble_transport(pred, mod_next_r, alpha, frames_next);
            solver::TransportField thalf;
            auto avg = [](const Field& a, const Field& b) {
                Field out(a.size());
                for (std::size_t q = 0; q < a.size(); ++q) out[q] = 0.5 * (a[q] + b[q]);
                return out;
            };
            thalf.gW = avg(transport.gW, transport_next.gW);
            thalf.hW2 = avg(transport.hW2, transport_next.hW2);
            thalf.hW3 = avg(transport.hW3, transport_next.hW3);
            solver::ForcingField fhalf;
            if (euler) {
                thalf.gZ = avg(transport.gZ, transport_next.gZ);
                thalf.hZ2 = avg(transport.hZ2, transport_next.hZ2);
                thalf.hZ3 = avg(transport.hZ3, transport_next.hZ3);
                thalf.gU = avg(transport.gU, transport_next.gU);
                thalf.hU2 = avg(transport.hU2, transport_next.hU2);
                thalf.hU3 = avg(transport.hU3, transport_next.hU3);
                const solver::ForcingField forcing_next =
                    solver::assemble_forcing(pred, mod_next_r, alpha, frames_next);
                fhalf.FW = avg(forcing.FW, forcing_next.FW);
                fhalf.FZ = avg(forcing.FZ, forcing_next.FZ);
                fhalf.FA2 = avg(forcing.FA2, forcing_next.FA2);
                fhalf.FA3 = avg(forcing.FA3, forcing_next.FA3);
            }
            sopt.transport_half = &thalf;
            sopt.forcing_half = euler ? &fhalf : nullptr;
            state = solver::step_ss(state, mod_step, alpha, frames, transport,
                                    euler ? &forcing : nullptr, sopt);
        }

        mod = mod_next;
        art.history.push_back(sample_of(mod, state.s));
        record_cadence(mod);
        if (std::getenv("SHOCKSIM_DEBUG") != nullptr &&
            art.history.size() % 200 == 0) {
            double mx = 0.0;
            for (double w : state.W) mx = std::max(mx, std::abs(w));
            std::fprintf(stderr, "[dbg] s=%.5f ds=%.3g maxW=%.4f kappa=%.4f tau=%.3e\n",
                         state.s, ds, mx, mod.kappa, mod.tau);
        }
    }

    art.final_mod = mod;
    if (cfg.tau_t_floor > 0.0) {
        try {
            art.blowup = diag::blowup_from_history(art.history, cfg.epsilon,
                                                   cfg.tau_t_floor * 1.01);
            art.blowup->rate_deviation = diag::rate_check(art.d1w0_history);
        } catch (const NoBlowupInWindow&) {
            art.blowup.reset();
        }
    }
    if (dim1 && art.blowup) {
        assemble_holder_section(cfg, art);
        if (art.holder_r.size() >= 6) {
            const diag::HolderFit fit = diag::holder_fit(art.holder_r, art.holder_dw);
            art.blowup->holder_exponent = fit.exponent;
            art.blowup->holder_ci = {fit.ci_lo, fit.ci_hi};
        }
    }
    art.final_state = std::move(state);
    return art;
}

namespace {

namespace fs = std::filesystem;

void write_modulation_csv(const std::string& path, const diag::ModHistory& hist,
                          const std::string& hash) {
    std::ofstream f(path);
    f << "# shocksim modulation version=" << kVersion << " config=" << hash << "\n";
    f << "t,s,kappa,tau,xi1,xi2,xi3,n2,n3,phi22,phi23,phi33,kdot,tdot,xdot1,xdot2,xdot3,"
         "ndot2,ndot3,pdot22,pdot23,pdot33\n";
    for (const diag::ModSample& m : hist) {
        f << fmt_g17(m.t) << ',' << fmt_g17(m.s) << ',' << fmt_g17(m.kappa) << ','
          << fmt_g17(m.tau) << ',' << fmt_g17(m.xi.x1) << ',' << fmt_g17(m.xi.x2) << ','
          << fmt_g17(m.xi.x3) << ',' << fmt_g17(m.n_check.x2) << ','
          << fmt_g17(m.n_check.x3) << ',' << fmt_g17(m.phi.a22) << ','
          << fmt_g17(m.phi.a23) << ',' << fmt_g17(m.phi.a33) << ','
          << fmt_g17(m.rates.kappa_dot) << ',' << fmt_g17(m.rates.tau_dot) << ','
          << fmt_g17(m.rates.xi_dot.x1) << ',' << fmt_g17(m.rates.xi_dot.x2) << ','
          << fmt_g17(m.rates.xi_dot.x3) << ',' << fmt_g17(m.rates.n_dot.x2) << ','
          << fmt_g17(m.rates.n_dot.x3) << ',' << fmt_g17(m.rates.phi_dot.a22) << ','
          << fmt_g17(m.rates.phi_dot.a23) << ',' << fmt_g17(m.rates.phi_dot.a33) << "\n";
    }
}

void write_monitor_csv(const std::string& path,
                       const std::vector<std::pair<double, diag::MonitorReport>>& mons,
                       const std::string& hash) {
    std::ofstream f(path);
    f << "# shocksim monitor version=" << kVersion << " config=" << hash << "\n";
    f << "s,inequality,location,bound,measured,margin\n";
    for (const auto& [s, rep] : mons)
        for (const diag::MonitorRow& r : rep.rows)
            f << fmt_g17(s) << ',' << r.inequality << ",(" << fmt_g(r.location.x1, 6) << ' '
              << fmt_g(r.location.x2, 6) << ' ' << fmt_g(r.location.x3, 6) << "),"
              << fmt_g17(r.bound) << ',' << fmt_g17(r.measured) << ','
              << fmt_g17(r.margin) << "\n";
}

void write_blowup_report(const std::string& path, const RunArtifacts& art,
                         const std::string& hash) {
    std::ofstream f(path);
    f << "# shocksim blowup version=" << kVersion << " config=" << hash << "\n";
    f << "blowup_report {\n";
    if (art.blowup) {
        const diag::BlowupReport& b = *art.blowup;
        f << "  T_star = " << fmt_g17(b.T_star) << "\n";
        f << "  xi_star = (" << fmt_g17(b.xi_star.x1) << ", " << fmt_g17(b.xi_star.x2)
          << ", " << fmt_g17(b.xi_star.x3) << ")\n";
        f << "  kappa_star = " << fmt_g17(b.kappa_star) << "\n";
        f << "  rate_deviation = " << fmt_g17(b.rate_deviation) << "\n";
        f << "  holder_exponent = " << fmt_g17(b.holder_exponent) << "\n";
        f << "  holder_ci = (" << fmt_g17(b.holder_ci.first) << ", "
          << fmt_g17(b.holder_ci.second) << ")\n";
    } else {
        f << "  status = no-blowup-in-window\n";
    }
    f << "}\n";
}

void write_plot(const std::string& path, const std::vector<std::pair<double, double>>& xy,
                const std::string& header) {
    std::ofstream f(path);
    f << "# " << header << "\n";
    for (const auto& [x, y] : xy) f << fmt_g17(x) << ' ' << fmt_g17(y) << "\n";
}

int run_profile_table(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const std::string hash = hex64(fnv1a(cfg.canonical));
    std::ofstream f(cfg.out_dir + "/profile_table.csv");
    f << "# shocksim profile-table version=" << kVersion << " config=" << hash << "\n";
    Grid3 g(cfg.n1, cfg.n2, cfg.n3, cfg.extent);
    std::vector<double> ax1, ax2, ax3;
    for (int i = 0; i < g.n1; ++i) ax1.push_back(g.coord(0, i));
    for (int j = 0; j < g.n2; ++j) ax2.push_back(g.coord(1, j));
    for (int k = 0; k < g.n3; ++k) ax3.push_back(g.coord(2, k));
    profiles::export_profile_table(f, ax1, ax2, ax3);
    return 0;
}

int run_family(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const std::string hash = hex64(fnv1a(cfg.canonical));
    const family::FamilySpec spec = family::FamilySpec::bar_w_seed();
    const family::CoeffTable table = family::taylor_coeffs(spec, cfg.family_order);
    {
        std::ofstream f(cfg.out_dir + "/family_coeffs.txt");
        family::serialize(f, table);
    }
    const family::CatalanReport rep = family::certify_catalan(table);
    std::ofstream f(cfg.out_dir + "/family_report.txt");
    f << "# shocksim family version=" << kVersion << " config=" << hash << "\n";
    f << "order = " << table.max_order() << "\n";
    f << "growth_D = " << fmt_g17(table.growth_d()) << "\n";
    f << "radius = " << fmt_g17(table.convergence_radius()) << "\n";
    f << "catalan_worst_ratio = " << fmt_g17(rep.worst) << "\n";
    f << "largest_valid_shell = " << fmt_g17(family::largest_valid_shell(table)) << "\n";
    for (const Vec3& y : {Vec3{5, 1, -2}, Vec3{20, 3, 0}, Vec3{50, 0, 0}}) {
        const double v = family::extend_by_trajectory(table, y);
        f << "extend(" << fmt_g(y.x1, 4) << "," << fmt_g(y.x2, 4) << "," << fmt_g(y.x3, 4)
          << ") = " << fmt_g17(v) << "  closed_form = " << fmt_g17(profiles::bar_w(y))
          << "\n";
    }
    return 0;
}

int run_validate_ic(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const std::string hash = hex64(fnv1a(cfg.canonical));
    datagen::DataOptions opt;
    opt.one_dimensional = false;
    opt.profile_taper = cfg.profile_taper;
    const datagen::InitialData data =
        datagen::make_initial_data(cfg.epsilon, cfg.kappa0, cfg.alpha, cfg.perturbation, opt);
    const datagen::ValidationReport rep = datagen::validate_initial_data(data, cfg.k_energy);
    std::ofstream f(cfg.out_dir + "/validation.txt");
    f << "# shocksim validate-ic version=" << kVersion << " config=" << hash << "\n";
    f << "all_pass = " << (rep.all_pass ? "true" : "false") << "\n";
    for (const datagen::CheckRow& c : rep.checks)
        f << (c.pass ? "PASS " : "FAIL ") << c.name << " bound=" << fmt_g(c.bound, 8)
          << " measured=" << fmt_g(c.measured, 8) << " margin=" << fmt_g(c.margin, 6)
          << " at=(" << fmt_g(c.worst.x1, 5) << "," << fmt_g(c.worst.x2, 5) << ","
          << fmt_g(c.worst.x3, 5) << ")\n";
    return 0;
}

int run_evolution_mode(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    fs::create_directories(cfg.out_dir + "/plots");
    fs::create_directories(cfg.out_dir + "/snapshots");
    const std::string hash = hex64(fnv1a(cfg.canonical));

    RunArtifacts art = run_evolution(cfg);

    write_modulation_csv(cfg.out_dir + "/modulation.csv", art.history, hash);
    write_monitor_csv(cfg.out_dir + "/monitor.csv", art.monitors, hash);
    write_blowup_report(cfg.out_dir + "/blowup.json-like.txt", art, hash);

    {
        std::vector<std::pair<double, double>> drift;
        for (std::size_t i = 0; i < art.d1w0_history.size(); ++i)
            drift.emplace_back(art.d1w0_history[i].first,
                               std::abs(art.d1w0_history[i].second + 1.0));
        write_plot(cfg.out_dir + "/plots/constraint_drift.dat", drift,
                   "s  |d1W(0)+1|");
        write_plot(cfg.out_dir + "/plots/wbar_err.dat", art.wbar_err_history,
                   "s  sup|W-bar_w|");
        if (!art.holder_r.empty()) {
            std::vector<std::pair<double, double>> hd;
            for (std::size_t i = 0; i < art.holder_r.size(); ++i)
                hd.emplace_back(std::log(art.holder_r[i]),
                                std::log(std::abs(art.holder_dw[i]) + 1e-300));
            write_plot(cfg.out_dir + "/plots/holder.dat", hd, "log r  log |dw|");
        }
        if (!art.ek_history.empty()) {
            std::ofstream f(cfg.out_dir + "/plots/ek.dat");
            f << "# s  E1 E2 E3\n";
            for (const auto& e : art.ek_history)
                f << fmt_g17(e[0]) << ' ' << fmt_g17(e[1]) << ' ' << fmt_g17(e[2]) << ' '
                  << fmt_g17(e[3]) << "\n";
        }
        // final profile slice along y1
        std::vector<std::pair<double, double>> slice;
        const Grid3& g = art.final_state.grid;
        int oi, oj, ok;
        g.origin(oi, oj, ok);
        for (int i = 0; i < g.n1; ++i)
            slice.emplace_back(g.coord(0, i), art.final_state.W[g.index(i, oj, ok)]);
        write_plot(cfg.out_dir + "/plots/w_final_slice.dat", slice, "y1  W(y1,0,0)");
    }

    write_snapshot(cfg.out_dir + "/snapshots/s_" + fmt_g(art.final_state.s, 10) + ".snap",
                   art.final_state, hash, cfg.snapshot_format);
    for (const FieldState& snap : art.snapshots)
        write_snapshot(cfg.out_dir + "/snapshots/s_" + fmt_g(snap.s, 10) + ".snap", snap,
                       hash, cfg.snapshot_format);
    return 0;
}

} // namespace

int run(const RunConfig& cfg) {
    switch (cfg.mode) {
        case RunMode::ProfileTable: return run_profile_table(cfg);
        case RunMode::Family: return run_family(cfg);
        case RunMode::ValidateIC: return run_validate_ic(cfg);
        case RunMode::Burgers1D:
        case RunMode::Burgers3D:
        case RunMode::Euler3D: return run_evolution_mode(cfg);
    }
    throw ConfigError("unhandled mode");
}

} // namespace shocksim
