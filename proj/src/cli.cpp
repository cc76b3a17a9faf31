#include "oal/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include <CLI11.hpp>

#include "oal/measures.hpp"
#include "oal/propagator.hpp"
#include "oal/scan.hpp"

namespace oal {

namespace {

std::string fmt_g(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::string fmt12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void warn_if_marginal(const SystemParams& p, bool quiet, std::ostream& err) {
    if (!quiet && !p.strong_coupling())
        err << "warning: omega12 = " << fmt_g(p.omega12) << " is below 5 max(g, omega23) = "
            << fmt_g(5.0 * std::max(p.g, p.omega23))
            << "; the ground-state coupling is not strongly dominant and the closed form is illustrative only\n";
}

std::vector<Branch> branch_list(BranchMode m) {
    if (m == BranchMode::plus)
        return {Branch::plus};
    if (m == BranchMode::minus)
        return {Branch::minus};
    return {Branch::plus, Branch::minus};
}

std::vector<Ordering> ordering_list(OrderingMode m) {
    if (m == OrderingMode::with_ordering)
        return {Ordering::with_ordering};
    if (m == OrderingMode::without_ordering)
        return {Ordering::without_ordering};
    return {Ordering::with_ordering, Ordering::without_ordering};
}

void write_wigner_csv(const std::string& path, const WignerGrid& grid) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw ConfigError("cannot write '" + path + "'");
    os << "re,im,W\n";
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix)
            os << fmt12(grid.re_at(ix)) << ',' << fmt12(grid.im_at(iy)) << ',' << fmt12(grid.at(ix, iy))
               << "\n";
}

} // namespace

int cmd_simulate(const ScenarioConfig& c, std::ostream& out, std::ostream& err) {
    const SystemParams p = to_params(c);
    warn_if_marginal(p, c.quiet, err);

    const std::vector<ResultRow> rows = run_scan(c);
    const std::string path = write_csv_with_legend(c, rows, "simulate");
    if (!c.quiet)
        out << "wrote " << rows.size() << " rows to " << path << "\n";

    if (c.measures.count(Measure::wigner) > 0) {
        // Phase-space raster of the conditional state at the last grid time.
        // The displaced-parity evaluation shifts the state by up to the
        // window diagonal, so the raster needs a dimension covering the
        // state amplitude plus that shift, not just the scan dimension.
        const double t_abs = c.t_end * p.t0();
        const double extent = 2.0 * p.r() + 3.0;
        const int dim = std::max(scan_dim(c),
                                 coherent_dim_for(2.0 * p.r() + extent * std::sqrt(2.0)));
        for (Branch b : branch_list(c.branch))
            for (Ordering o : ordering_list(c.ordering)) {
                if (detection_probability(t_abs, p, b, o) < 1e-14)
                    continue;
                const FockVector psi = cat_to_fock(conditional_state(t_abs, p, b, o), dim);
                const WignerGrid grid = wigner_grid(psi, -extent, extent, -extent, extent, 101, 101);
                const std::string stem = std::string("simulate_wigner_") +
                                         (b == Branch::plus ? "plus" : "minus") + "_" +
                                         (o == Ordering::with_ordering ? "with" : "without");
                const std::string wpath =
                    (std::filesystem::path(c.out) / (stem + ".csv")).string();
                write_wigner_csv(wpath, grid);
                if (!c.quiet)
                    out << "wrote Wigner raster to " << wpath << "\n";
            }
    }
    return exit_ok;
}

int cmd_figure(const std::string& name, const ScenarioConfig& base, std::ostream& out, std::ostream& err) {
    struct Preset {
        std::string stem;
        ScenarioConfig cfg;
    };
    std::vector<Preset> presets;

    auto derived = [&](double r, double ratio) {
        ScenarioConfig c = base;
        c.dimensionless = true;
        c.r = r;
        c.ratio = ratio;
        return c;
    };

    if (name == "amplitudes") {
        // Circular phase-space trajectories of the two coherent components.
        ScenarioConfig c = derived(1.8, base.ratio);
        c.t_start = 0.0;
        c.t_end = 1.0;
        c.n_points = 720;
        c.branch = BranchMode::plus;
        c.ordering = OrderingMode::with_ordering;
        c.measures = {Measure::q};
        presets.push_back({"figure_amplitudes_r1.8", c});
    } else if (name == "noise") {
        // Total noise of both conditional branches over one period, in the
        // deliberately low-ratio illustrative regime.
        for (double r : {0.25, 0.5, 1.0}) {
            ScenarioConfig c = derived(r, 8.0);
            c.t_start = 0.0;
            c.t_end = 1.0;
            c.n_points = 2000;
            c.branch = BranchMode::both;
            c.ordering = OrderingMode::with_ordering;
            c.measures = {Measure::T, Measure::q};
            presets.push_back({"figure_noise_r" + fmt_g(r), c});
        }
    } else if (name == "parity" || name == "relative-noise") {
        // Window around the maximal cat separation where the ordering
        // correction visibly shifts the curves.
        for (double r : {0.25, 0.5}) {
            ScenarioConfig c = derived(r, 50.0);
            c.t_start = 0.44;
            c.t_end = 0.56;
            c.n_points = 2400;
            c.branch = BranchMode::plus;
            c.ordering = OrderingMode::both;
            c.measures = name == "parity" ? std::set<Measure>{Measure::P}
                                          : std::set<Measure>{Measure::TA};
            const std::string tag = name == "parity" ? "figure_parity_r" : "figure_relative_noise_r";
            presets.push_back({tag + fmt_g(r), c});
        }
    } else {
        throw ConfigError("unknown figure '" + name +
                          "' (know amplitudes, noise, parity, relative-noise)");
    }

    for (const Preset& preset : presets) {
        warn_if_marginal(to_params(preset.cfg), preset.cfg.quiet, err);
        const std::vector<ResultRow> rows = run_scan(preset.cfg);
        const std::string path = write_csv_with_legend(preset.cfg, rows, preset.stem);
        if (!preset.cfg.quiet)
            out << "wrote " << rows.size() << " rows to " << path << "\n";
    }
    return exit_ok;
}

int cmd_critical(double fraction, std::ostream& out, std::ostream& err) {
    (void)err;
    if (!(fraction > 0.0 && fraction < 1.0))
        throw ConfigError("critical: fraction must lie in (0, 1)");

    // The ordering correction accumulated over half a period is pi r^2; it
    // reaches `fraction` of pi at r_c = sqrt(fraction).
    const double rc = std::sqrt(fraction);
    const double amplitude = 2.0 * rc;
    const int dim = coherent_dim_for(amplitude);

    out << "critical drive ratio r_c = " << fmt12(rc) << " (ordering phase = " << fmt_g(fraction)
        << " pi over half a period)\n";
    out << "cat amplitude at the half-period point: 2 r_c = " << fmt12(amplitude) << "\n";
    out << "mean photon numbers of the limiting conditional states at this amplitude:\n";
    out << "  odd superposition  " << fmt12(mean_photon_number(odd_coherent(amplitude, dim))) << "\n";
    out << "  even superposition " << fmt12(mean_photon_number(even_coherent(amplitude, dim))) << "\n";
    out << "  90-degree superposition " << fmt12(mean_photon_number(yurke_stoler(amplitude, dim))) << "\n";
    return exit_ok;
}

int cmd_validate(const ScenarioConfig& c, std::ostream& out, std::ostream& err) {
    (void)err;
    const double r_default = c.dimensionless ? c.r : to_params(c).r();
    bool all_ok = true;
    auto check = [&](const std::string& name, bool ok, const std::string& detail) {
        out << (ok ? "[pass] " : "[FAIL] ") << name << ": " << detail << "\n";
        all_ok = all_ok && ok;
    };

    // 1. Internal consistency of the closed form at random times.
    {
        const SystemParams p = SystemParams::dimensionless(r_default, c.ratio);
        std::mt19937 rng(12345);
        std::uniform_real_distribution<double> ut(0.0, 3.0 * p.t0());
        double worst_conj = 0.0, worst_prob = 0.0, worst_phase = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double t = ut(rng);
            worst_conj = std::max(worst_conj,
                                  std::abs(alpha_pm(t, p, Branch::minus) + std::conj(alpha_pm(t, p, Branch::plus))));
            const double psum = detection_probability(t, p, Branch::plus, Ordering::with_ordering) +
                                detection_probability(t, p, Branch::minus, Ordering::with_ordering);
            worst_prob = std::max(worst_prob, std::abs(psum - 1.0));
            const double resid = std::remainder(
                phase_no_ordering(t, p) - phase_exact(t, p) - ordering_correction(t, p), 2.0 * M_PI);
            worst_phase = std::max(worst_phase, std::abs(resid));
        }
        check("closed-form consistency", worst_conj <= 1e-12 && worst_prob <= 1e-12 && worst_phase <= 1e-12,
              "conjugation " + fmt_g(worst_conj) + ", prob sum " + fmt_g(worst_prob) + ", phase residual " +
                  fmt_g(worst_phase));
    }

    // 2. Closed-form total noise against the generic Fock-space evaluation.
    {
        const SystemParams p = SystemParams::dimensionless(r_default, c.ratio);
        const int dim = c.dim > 0 ? c.dim : coherent_dim_for(2.0 * r_default);
        double worst = 0.0;
        for (int i = 1; i <= 32; ++i) {
            const double t = p.t0() * i / 32.0;
            for (Branch b : {Branch::plus, Branch::minus}) {
                if (detection_probability(t, p, b, Ordering::with_ordering) < 1e-14)
                    continue;
                const CatState cat = conditional_state(t, p, b, Ordering::with_ordering);
                worst = std::max(worst,
                                 std::abs(total_noise_closed_form(cat) - total_noise(cat_to_fock(cat, dim))));
            }
        }
        check("total-noise closed form vs Fock", worst <= 1e-6, "max |diff| = " + fmt_g(worst));
    }

    // 3. Stepped integration of the effective model against its closed form,
    //    at step counts doubled until the fidelity settles.
    {
        double worst_deficit = 0.0;
        bool converged_all = true;
        for (double r : {0.25, 1.0, 1.8}) {
            const SystemParams p = SystemParams::dimensionless(r, c.ratio);
            const int dim = c.dim > 0 ? c.dim : coherent_dim_for(2.0 * r);
            const AtomFieldState init =
                AtomFieldState::ground_superposition(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), dim);
            for (double frac : {0.25, 0.5}) {
                const double t = frac * p.t0();
                const AtomFieldState target = magnus_UK(t, p, init);
                long steps = c.steps > 0 ? c.steps : 512;
                double fid_prev = -1.0;
                for (int iter = 0; iter < 8; ++iter) {
                    PropagateOptions po;
                    po.steps = steps;
                    po.sample_times = {t};
                    const double fid = fidelity(propagate_HK(init, t, p, po).final_state, target);
                    if (fid_prev >= 0.0 && std::abs(fid - fid_prev) < 1e-9) {
                        fid_prev = fid;
                        break;
                    }
                    fid_prev = fid;
                    steps *= 2;
                }
                worst_deficit = std::max(worst_deficit, 1.0 - fid_prev);
                converged_all = converged_all && (fid_prev >= 1.0 - 1e-6);
            }
        }
        check("stepped evolution reaches the closed form", converged_all,
              "max fidelity deficit " + fmt_g(worst_deficit));
    }

    // 4. Nested commutators of the effective generator vanish away from the
    //    truncation edge.
    {
        const SystemParams p = SystemParams::dimensionless(std::max(r_default, 0.5), c.ratio);
        std::mt19937 rng(777);
        std::uniform_real_distribution<double> ut(0.0, 2.0 * p.t0());
        const int dim = c.dim > 0 ? c.dim : 48;
        const double tol = 1e-10 * std::pow(p.r() * p.delta(), 3);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i)
            worst = std::max(worst, nested_commutator_norm(ut(rng), ut(rng), ut(rng), p, dim));
        check("nested commutators vanish (interior)", worst <= tol,
              "max interior norm " + fmt_g(worst) + " vs tol " + fmt_g(tol));
    }

    // 5. Frame equivalence: the rotating-frame stepper against the exact
    //    one-shot solve of the static picture.
    {
        const SystemParams p = SystemParams::dimensionless(0.5, 20.0);
        const int dim = c.dim > 0 ? c.dim : 24;
        const double t = 0.25 * p.t0();
        const AtomFieldState init = AtomFieldState::bare_ground_vacuum(dim);
        PropagateOptions po;
        po.steps = c.steps > 0 ? c.steps : static_cast<long>(std::ceil(640.0 * p.omega12 * t / (2 * M_PI)));
        po.sample_times = {t};
        const AtomFieldState psi_j = propagate_HJ(init, t, p, po).final_state;
        PropagateOptions pi_opts;
        pi_opts.sample_times = {t};
        const AtomFieldState psi_i = propagate_HI(init, t, p, pi_opts).final_state;
        const double fid = fidelity(psi_j, apply_frame_U1(t, p, psi_i, true));
        check("frame equivalence (rotating vs static picture)", fid >= 1.0 - 1e-6,
              "fidelity deficit " + fmt_g(1.0 - fid));
    }

    // 6. The excited level empties and the closed form improves as the
    //    ground-state coupling grows.
    {
        const int dim = c.dim > 0 ? c.dim : 32;
        std::vector<double> fids, pops;
        for (double ratio : {8.0, 50.0, 200.0}) {
            const SystemParams p = SystemParams::dimensionless(r_default, ratio);
            const double t = 0.5 * p.t0();
            PropagateOptions po;
            po.steps = c.steps > 0 ? c.steps : static_cast<long>(std::ceil(320.0 * p.omega12 * t / (2 * M_PI)));
            po.compare_analytic = true;
            po.sample_times.resize(201);
            for (int i = 0; i <= 200; ++i)
                po.sample_times[i] = t * i / 200.0;
            const AtomFieldState init = AtomFieldState::bare_ground_vacuum(dim);
            const PropagationResult res = propagate_HJ(init, t, p, po);
            double max_pop = 0.0;
            for (const auto& s : res.samples)
                max_pop = std::max(max_pop, s.excited_population);
            fids.push_back(res.samples.back().fidelity_vs_analytic);
            pops.push_back(max_pop);
        }
        const bool mono = fids[0] < fids[1] && fids[1] < fids[2] && pops[0] > pops[1] && pops[1] > pops[2];
        check("excited-level suppression with growing coupling", mono,
              "fidelities " + fmt_g(fids[0]) + " < " + fmt_g(fids[1]) + " < " + fmt_g(fids[2]) +
                  "; max excited populations " + fmt_g(pops[0]) + " > " + fmt_g(pops[1]) + " > " +
                  fmt_g(pops[2]));
    }

    out << (all_ok ? "validation passed\n" : "validation FAILED\n");
    return all_ok ? exit_ok : exit_validation_failure;
}

int cmd_sweep(const std::vector<double>& rs, const ScenarioConfig& base, std::ostream& out, std::ostream& err) {
    if (!base.dimensionless)
        throw ConfigError("sweep varies r and requires dimensionless mode");
    if (rs.empty())
        throw ConfigError("sweep: give at least one r value");
    for (double r : rs) {
        ScenarioConfig c = base;
        c.r = r;
        warn_if_marginal(to_params(c), c.quiet, err);
        const std::vector<ResultRow> rows = run_scan(c);
        const std::string path = write_csv_with_legend(c, rows, "sweep_r" + fmt_g(r));
        if (!c.quiet)
            out << "wrote " << rows.size() << " rows to " << path << "\n";
    }
    return exit_ok;
}

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    double r = 0.0;
    double ratio = 0.0;
    std::string ordering;
    std::string branch;
    std::string measures;
    int dim = 0;
    long steps = 0;
    bool quiet = false;
    double t_start = 0.0;
    double t_end = 0.0;
    int points = 0;
    bool oracle = false;

    CLI::Option* o_config = nullptr;
    CLI::Option* o_out = nullptr;
    CLI::Option* o_r = nullptr;
    CLI::Option* o_ratio = nullptr;
    CLI::Option* o_ordering = nullptr;
    CLI::Option* o_branch = nullptr;
    CLI::Option* o_measures = nullptr;
    CLI::Option* o_dim = nullptr;
    CLI::Option* o_steps = nullptr;
    CLI::Option* o_quiet = nullptr;
    CLI::Option* o_t_start = nullptr;
    CLI::Option* o_t_end = nullptr;
    CLI::Option* o_points = nullptr;
    CLI::Option* o_oracle = nullptr;
};

void add_common(CLI::App* sub, CommonFlags& f, bool with_grid) {
    f.o_config = sub->add_option("--config", f.config_path, "scenario file (key = value lines)");
    f.o_out = sub->add_option("--out", f.out_dir, "output directory");
    f.o_r = sub->add_option("--r", f.r, "drive-to-coupling ratio omega23/g");
    f.o_ratio = sub->add_option("--ratio", f.ratio, "omega12/delta ratio (dimensionless mode)");
    f.o_ordering = sub->add_option("--ordering", f.ordering, "with | without | both");
    f.o_branch = sub->add_option("--branch", f.branch, "plus | minus | both");
    f.o_dim = sub->add_option("--dim", f.dim, "Fock-space dimension (0 = automatic)");
    f.o_steps = sub->add_option("--steps", f.steps, "propagator steps (0 = default)");
    f.o_quiet = sub->add_flag("--quiet", f.quiet, "suppress progress and warnings");
    if (with_grid) {
        f.o_t_start = sub->add_option("--t-start", f.t_start, "grid start in units of t0");
        f.o_t_end = sub->add_option("--t-end", f.t_end, "grid end in units of t0");
        f.o_points = sub->add_option("--points", f.points, "number of grid points");
        f.o_measures = sub->add_option("--measures", f.measures, "comma list: T,P,TA,n,q,wigner");
        f.o_oracle = sub->add_flag("--oracle", f.oracle, "also run the numeric propagator");
    }
}

ScenarioConfig build_config(const CommonFlags& f) {
    ScenarioConfig c;
    if (f.o_config && f.o_config->count() > 0)
        c = parse_config_file(f.config_path);
    if (f.o_out && f.o_out->count() > 0)
        c.out = f.out_dir;
    if (f.o_r && f.o_r->count() > 0)
        c.r = f.r;
    if (f.o_ratio && f.o_ratio->count() > 0)
        c.ratio = f.ratio;
    if (f.o_ordering && f.o_ordering->count() > 0) {
        if (f.ordering == "with")
            c.ordering = OrderingMode::with_ordering;
        else if (f.ordering == "without")
            c.ordering = OrderingMode::without_ordering;
        else if (f.ordering == "both")
            c.ordering = OrderingMode::both;
        else
            throw ConfigError("--ordering must be with/without/both");
    }
    if (f.o_branch && f.o_branch->count() > 0) {
        if (f.branch == "plus")
            c.branch = BranchMode::plus;
        else if (f.branch == "minus")
            c.branch = BranchMode::minus;
        else if (f.branch == "both")
            c.branch = BranchMode::both;
        else
            throw ConfigError("--branch must be plus/minus/both");
    }
    if (f.o_dim && f.o_dim->count() > 0)
        c.dim = f.dim;
    if (f.o_steps && f.o_steps->count() > 0)
        c.steps = f.steps;
    if (f.o_quiet && f.o_quiet->count() > 0)
        c.quiet = true;
    if (f.o_t_start && f.o_t_start->count() > 0)
        c.t_start = f.t_start;
    if (f.o_t_end && f.o_t_end->count() > 0)
        c.t_end = f.t_end;
    if (f.o_points && f.o_points->count() > 0)
        c.n_points = f.points;
    if (f.o_oracle && f.o_oracle->count() > 0)
        c.oracle = true;
    if (f.o_measures && f.o_measures->count() > 0) {
        // Reuse the config-file parser for the shared grammar.
        const ScenarioConfig m = parse_config_text("measures = " + f.measures + "\n");
        c.measures = m.measures;
    }
    // Canonical revalidation of the merged configuration.
    return parse_config_text(serialize_config(c));
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"conditional cat states of a strongly driven one-atom laser"};
    app.require_subcommand(1);

    CommonFlags f_sim, f_fig, f_val, f_swp;
    CLI::App* sim = app.add_subcommand("simulate", "tabulate conditional-state measures on a time grid");
    add_common(sim, f_sim, true);

    CLI::App* fig = app.add_subcommand("figure", "emit a preset scenario");
    std::string figure_name;
    fig->add_option("name", figure_name, "amplitudes | noise | parity | relative-noise")->required();
    add_common(fig, f_fig, false);

    CLI::App* crit = app.add_subcommand("critical", "report the critical drive ratio");
    double fraction = 0.1;
    crit->add_option("--fraction", fraction, "ordering phase over half a period, in units of pi");

    CLI::App* val = app.add_subcommand("validate", "cross-check closed form against numeric propagation");
    add_common(val, f_val, false);

    CLI::App* swp = app.add_subcommand("sweep", "run the scenario for several r values");
    std::vector<double> sweep_rs;
    swp->add_option("--rs", sweep_rs, "r values to sweep")->expected(-1);
    add_common(swp, f_swp, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config_error;
    }

    try {
        if (app.got_subcommand(sim))
            return cmd_simulate(build_config(f_sim), out, err);
        if (app.got_subcommand(fig))
            return cmd_figure(figure_name, build_config(f_fig), out, err);
        if (app.got_subcommand(crit))
            return cmd_critical(fraction, out, err);
        if (app.got_subcommand(val))
            return cmd_validate(build_config(f_val), out, err);
        if (app.got_subcommand(swp))
            return cmd_sweep(sweep_rs, build_config(f_swp), out, err);
        err << "config error: no subcommand\n";
        return exit_config_error;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const ConvergenceError& e) {
        err << "convergence error: " << e.what() << "\n";
        return exit_convergence_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation_failure;
    }
}

} // namespace oal
