// Command-line surface: solve, reference, riemann, sweep, entropy-check.
// Exit status is 0 iff every assertion requested by the subcommand passed;
// the last stdout line is a machine-readable summary.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "ibsh/csv.hpp"
#include "ibsh/entropy.hpp"
#include "ibsh/hyperbolic.hpp"
#include "ibsh/monitors.hpp"
#include "ibsh/regularized.hpp"
#include "ibsh/sweep.hpp"

namespace {

using namespace ibsh;

int finish(bool ok, const std::string& detail) {
    std::cout << "summary: status=" << (ok ? "ok" : "fail") << (detail.empty() ? "" : " ")
              << detail << std::endl;
    return ok ? 0 : 1;
}

struct DatumOpts {
    std::string kind = "gaussian";
    double ul = 0.0, ur = 1.0, width = 0.05;
    std::string file;
    double x_min = -5.0, x_max = 5.0;
    int n = 1024;

    void attach(CLI::App* cmd) {
        cmd->add_option("--datum", kind, "gaussian|riemann|sine|file")
            ->check(CLI::IsMember({"gaussian", "riemann", "sine", "file"}));
        cmd->add_option("--datum-ul", ul, "smoothed-Riemann left state");
        cmd->add_option("--datum-ur", ur, "smoothed-Riemann right state");
        cmd->add_option("--datum-width", width, "smoothed-Riemann transition width");
        cmd->add_option("--datum-file", file, "profile CSV for --datum file");
        cmd->add_option("--x-min", x_min);
        cmd->add_option("--x-max", x_max);
        cmd->add_option("--n", n, "cell count")->required();
    }

    Field build(const Grid1D& grid) const {
        SweepConfig cfg;
        if (kind == "gaussian") cfg.datum = DatumKind::Gaussian;
        else if (kind == "riemann") cfg.datum = DatumKind::RiemannSmoothed;
        else if (kind == "sine") cfg.datum = DatumKind::Sine;
        else cfg.datum = DatumKind::FromFile;
        cfg.datum_ul = ul;
        cfg.datum_ur = ur;
        cfg.datum_width = width;
        cfg.datum_file = file;
        return make_datum(cfg, grid);
    }
};

int run_solve(const DatumOpts& datum, double eps, double beta, double t_end,
              const std::string& scheme, int outputs, double cfl, bool mollify,
              const std::string& out_path, int verbosity) {
    const Grid1D grid = make_grid(datum.x_min, datum.x_max, datum.n);
    Field u0 = datum.build(grid);
    const RegParams p = RegParams::free_params(eps, beta);
    if (mollify) u0 = mollify_initial(u0, p);

    TimeControls tc;
    tc.t_end = t_end;
    tc.cfl_safety = cfl;
    tc.scheme = scheme == "imex" ? Scheme::IMEX : Scheme::ExplicitRK4;
    tc.output_times = uniform_output_times(t_end, outputs);

    try {
        const Trajectory traj = integrate(u0, p, tc);
        if (!out_path.empty()) save_trajectory(traj, out_path);
        if (verbosity > 0)
            std::cout << "steps=" << traj.steps
                      << " sup_u=" << format_double(max_abs(traj.states.back())) << "\n";
        if (traj.support_reached_boundary)
            std::cout << "warning: solution support reached the periodic wrap\n";
        return finish(true, "subcommand=solve steps=" + std::to_string(traj.steps));
    } catch (const BlowUpError& e) {
        return finish(false, "subcommand=solve blowup_t=" + format_double(e.t_fail));
    }
}

int run_reference(const DatumOpts& datum, double t_end, const std::string& flux_kind,
                  const std::string& out_path) {
    const Grid1D grid = make_grid(datum.x_min, datum.x_max, datum.n);
    const Field u0 = datum.build(grid);
    const NumericalFlux kind =
        flux_kind == "rusanov" ? NumericalFlux::Rusanov : NumericalFlux::Godunov;
    const Field u = solve_reference(u0, t_end, 0.9, kind);
    if (!out_path.empty()) save_profile(u, out_path);
    return finish(true, "subcommand=reference mass=" + format_double(integral(u)));
}

int run_riemann(double ul, double ur, double t, int samples, int points,
                const std::string& out_path) {
    const RiemannSolution sol = riemann_exact(ul, ur, samples);
    const RiemannCheck check = verify_riemann(sol);

    std::cout << "wave,u_lo,u_hi,s_lo,s_hi\n";
    for (const Wave& w : sol.waves) {
        std::cout << (w.type == WaveType::Shock ? "shock" : "rarefaction") << ","
                  << format_double(w.u_lo) << "," << format_double(w.u_hi) << ","
                  << format_double(w.s_lo) << "," << format_double(w.s_hi) << "\n";
    }

    // Sampled profile over the fan (plus 20% padding), at the requested time.
    double s_min = -1.0, s_max = 1.0;
    if (!sol.waves.empty()) {
        s_min = sol.waves.front().s_lo;
        s_max = sol.waves.back().s_hi;
    }
    const double pad = 0.2 * std::max(1.0, s_max - s_min);
    const double x_lo = (s_min - pad) * t, x_hi = (s_max + pad) * t;
    Csv profile;
    profile.header = {"x", "u"};
    for (int i = 0; i < points; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / (points - 1);
        profile.rows.push_back({format_double(x), format_double(evaluate(sol, x, t))});
    }
    if (!out_path.empty()) {
        write_csv(profile, out_path);
    } else {
        std::cout << "\nx,u\n";
        for (const auto& row : profile.rows) std::cout << row[0] << "," << row[1] << "\n";
    }

    const std::string detail = "subcommand=riemann waves=" + std::to_string(sol.waves.size()) +
                               " rh_error=" + format_double(check.max_rankine_hugoniot_error) +
                               " oleinik_margin=" + format_double(check.worst_oleinik_margin);
    return finish(check.ok, detail);
}

int run_sweep_cmd(const std::string& config_path, const std::string& out_dir, bool plot) {
    SweepConfig cfg = SweepConfig::from_file(config_path);
    if (plot) cfg.plot = true;
    const ConvergenceReport rep = run_sweep(cfg);
    write_sweep_outputs(rep, out_dir);
    for (const std::string& msg : rep.assertion_failures) std::cout << "assertion: " << msg << "\n";
    std::string detail = "subcommand=sweep rows=" + std::to_string(rep.rows.size()) +
                         " failures=" + std::to_string(rep.assertion_failures.size());
    return finish(rep.assertions_ok, detail);
}

int run_entropy_check(const std::string& traj_path, const std::string& suite,
                      const std::string& out_path) {
    const Trajectory traj = load_trajectory(traj_path);
    const std::vector<EntropyPair> pairs = standard_entropy_suite();
    std::vector<TestFunction> phis;
    if (suite == "standard") phis = standard_phi_suite();
    else throw std::runtime_error("entropy-check: unknown suite '" + suite + "'");

    const auto production = entropy_production_suite(traj, pairs, phis);
    Csv out;
    out.header = {"pair_id", "phi_id", "production"};
    double max_production = -std::numeric_limits<double>::infinity();
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
        for (std::size_t fi = 0; fi < phis.size(); ++fi) {
            out.rows.push_back(
                {pairs[pi].id(), phis[fi].id, format_double(production[pi][fi])});
            max_production = std::max(max_production, production[pi][fi]);
        }
    }
    if (!out_path.empty()) {
        write_csv(out, out_path);
    } else {
        std::cout << "pair_id,phi_id,production\n";
        for (const auto& row : out.rows)
            std::cout << row[0] << "," << row[1] << "," << row[2] << "\n";
    }
    return finish(true, "subcommand=entropy-check max_production=" + format_double(max_production));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for a dispersive-diffusive regularization "
                 "of a quintic scalar conservation law"};
    app.require_subcommand(1);
    int verbosity = 0;
    app.add_flag("-v,--verbose", verbosity, "more progress output");

    // solve
    auto* solve = app.add_subcommand("solve", "integrate the regularized equation");
    DatumOpts solve_datum;
    solve_datum.attach(solve);
    double eps = 0.1, beta = 0.01, t_end = 0.5, cfl = 0.8;
    int outputs = 65;
    bool mollify = false;
    std::string scheme = "rk4", solve_out;
    solve->add_option("--eps", eps)->required();
    solve->add_option("--beta", beta)->required();
    solve->add_option("--t-end", t_end)->required();
    solve->add_option("--scheme", scheme)->check(CLI::IsMember({"rk4", "imex"}));
    solve->add_option("--outputs", outputs, "number of recorded output times");
    solve->add_option("--cfl", cfl, "CFL safety factor");
    solve->add_flag("--mollify", mollify, "mollify the datum per the initial-data recipe");
    solve->add_option("--out", solve_out, "trajectory CSV path (plus .meta sidecar)");

    // reference
    auto* reference = app.add_subcommand("reference", "entropy-correct hyperbolic solve");
    DatumOpts ref_datum;
    ref_datum.attach(reference);
    double ref_t_end = 0.5;
    std::string ref_flux = "godunov", ref_out;
    reference->add_option("--t-end", ref_t_end)->required();
    reference->add_option("--flux", ref_flux)->check(CLI::IsMember({"godunov", "rusanov"}));
    reference->add_option("--out", ref_out, "final profile CSV path");

    // riemann
    auto* riemann = app.add_subcommand("riemann", "exact Riemann solution for the quintic flux");
    double ul = 0.0, ur = 1.0, rt = 1.0;
    int samples = 4097, points = 1001;
    std::string riemann_out;
    riemann->add_option("--ul", ul)->required();
    riemann->add_option("--ur", ur)->required();
    riemann->add_option("--t", rt)->required();
    riemann->add_option("--samples", samples, "envelope sample count");
    riemann->add_option("--points", points, "profile sample count");
    riemann->add_option("--out", riemann_out, "profile CSV path");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "singular-limit parameter sweep");
    std::string config_path, out_dir = ".";
    bool plot = false;
    sweep->add_option("--config", config_path, "key = value sweep configuration")->required();
    sweep->add_option("--out-dir", out_dir, "output directory");
    sweep->add_flag("--plot", plot, "emit SVG plots");

    // entropy-check
    auto* echeck = app.add_subcommand("entropy-check", "entropy production of a stored trajectory");
    std::string traj_path, suite = "standard", echeck_out;
    echeck->add_option("--traj", traj_path, "trajectory CSV written by solve")->required();
    echeck->add_option("--suite", suite, "phi suite identifier");
    echeck->add_option("--out", echeck_out, "production CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed())
            return run_solve(solve_datum, eps, beta, t_end, scheme, outputs, cfl, mollify,
                             solve_out, verbosity);
        if (reference->parsed()) return run_reference(ref_datum, ref_t_end, ref_flux, ref_out);
        if (riemann->parsed()) return run_riemann(ul, ur, rt, samples, points, riemann_out);
        if (sweep->parsed()) return run_sweep_cmd(config_path, out_dir, plot);
        if (echeck->parsed()) return run_entropy_check(traj_path, suite, echeck_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cout << "summary: status=error" << std::endl;
        return 2;
    }
    return 1;
}
