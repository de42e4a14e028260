#include "ibsh/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <future>
#include <sstream>
#include <thread>

#include "ibsh/csv.hpp"
#include "ibsh/entropy.hpp"
#include "ibsh/hyperbolic.hpp"
#include "ibsh/regularized.hpp"
#include "ibsh/svg.hpp"

namespace ibsh {

namespace {

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse_double(item));
    }
    return out;
}

std::string join_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out;
}

unsigned worker_cap() {
    if (const char* env = std::getenv("IBSH_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace

void SweepConfig::validate() const {
    if (!(x_max > x_min)) throw std::invalid_argument("SweepConfig: empty domain");
    if (n < 16) throw std::invalid_argument("SweepConfig: n below minimum");
    if (!(t_end > 0.0)) throw std::invalid_argument("SweepConfig: t_end must be positive");
    if (eps_list.empty()) throw std::invalid_argument("SweepConfig: eps_list empty");
    for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
        if (!(eps_list[i] > eps_list[i + 1]))
            throw std::invalid_argument("SweepConfig: eps_list must be strictly decreasing");
    if (regime == Regime::Free && beta_list.size() != eps_list.size())
        throw std::invalid_argument("SweepConfig: free regime needs beta_list matching eps_list");
    if (p_list.empty()) throw std::invalid_argument("SweepConfig: p_list empty");
    for (double p : p_list)
        if (!(p >= 1.0 && p < 10.0))
            throw std::invalid_argument("SweepConfig: p_list entries must lie in [1, 10)");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
        throw std::invalid_argument("SweepConfig: cfl_safety must lie in (0, 1]");
    if (n_outputs < 3) throw std::invalid_argument("SweepConfig: n_outputs too small");
    if (!(window_lo == 0.0 && window_hi == 0.0)) {
        if (!(window_lo < window_hi) || window_lo < x_min || window_hi > x_max)
            throw std::invalid_argument("SweepConfig: window outside domain");
    }
    if (entropy_suite != "standard" && entropy_suite != "none")
        throw std::invalid_argument("SweepConfig: unknown entropy_suite '" + entropy_suite + "'");
    if (phi_suite != "standard" && phi_suite != "none")
        throw std::invalid_argument("SweepConfig: unknown phi_suite '" + phi_suite + "'");
    if (!(mollifier_c > 0.0)) throw std::invalid_argument("SweepConfig: mollifier_c must be positive");
    for (std::size_t i = 0; i < eps_list.size(); ++i) params_for(i);  // range checks
}

std::pair<double, double> SweepConfig::window() const {
    if (window_lo == 0.0 && window_hi == 0.0) {
        const double quarter = 0.25 * (x_max - x_min);
        return {x_min + quarter, x_max - quarter};
    }
    return {window_lo, window_hi};
}

RegParams SweepConfig::params_for(std::size_t row) const {
    if (row >= eps_list.size()) throw std::out_of_range("SweepConfig::params_for");
    const double eps = eps_list[row];
    switch (regime) {
        case Regime::EpsSquared: return RegParams::eps_squared(eps, c_regime);
        case Regime::EpsPower: return RegParams::eps_power(eps, alpha, c_regime);
        case Regime::Free: return RegParams::free_params(eps, beta_list[row]);
    }
    throw std::logic_error("SweepConfig::params_for: bad regime");
}

SweepConfig SweepConfig::from_file(const std::filesystem::path& path) {
    const auto kv = read_kv(path);
    SweepConfig cfg;
    auto get = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    if (const auto* v = get("datum")) {
        if (*v == "gaussian") cfg.datum = DatumKind::Gaussian;
        else if (*v == "riemann") cfg.datum = DatumKind::RiemannSmoothed;
        else if (*v == "sine") cfg.datum = DatumKind::Sine;
        else if (*v == "file") cfg.datum = DatumKind::FromFile;
        else throw std::runtime_error("config: unknown datum '" + *v + "'");
    }
    if (const auto* v = get("datum_ul")) cfg.datum_ul = parse_double(*v);
    if (const auto* v = get("datum_ur")) cfg.datum_ur = parse_double(*v);
    if (const auto* v = get("datum_width")) cfg.datum_width = parse_double(*v);
    if (const auto* v = get("datum_file")) cfg.datum_file = *v;
    if (const auto* v = get("x_min")) cfg.x_min = parse_double(*v);
    if (const auto* v = get("x_max")) cfg.x_max = parse_double(*v);
    if (const auto* v = get("n")) cfg.n = std::stoi(*v);
    if (const auto* v = get("t_end")) cfg.t_end = parse_double(*v);
    if (const auto* v = get("eps_list")) cfg.eps_list = parse_list(*v);
    if (const auto* v = get("regime")) {
        if (*v == "eps2") cfg.regime = Regime::EpsSquared;
        else if (*v == "eps_power") cfg.regime = Regime::EpsPower;
        else if (*v == "free") cfg.regime = Regime::Free;
        else throw std::runtime_error("config: unknown regime '" + *v + "'");
    }
    if (const auto* v = get("alpha")) cfg.alpha = parse_double(*v);
    if (const auto* v = get("c_regime")) cfg.c_regime = parse_double(*v);
    if (const auto* v = get("beta_list")) cfg.beta_list = parse_list(*v);
    if (const auto* v = get("p_list")) cfg.p_list = parse_list(*v);
    if (const auto* v = get("window_lo")) cfg.window_lo = parse_double(*v);
    if (const auto* v = get("window_hi")) cfg.window_hi = parse_double(*v);
    if (const auto* v = get("scheme")) {
        if (*v == "rk4") cfg.scheme = Scheme::ExplicitRK4;
        else if (*v == "imex") cfg.scheme = Scheme::IMEX;
        else throw std::runtime_error("config: unknown scheme '" + *v + "'");
    }
    if (const auto* v = get("cfl_safety")) cfg.cfl_safety = parse_double(*v);
    if (const auto* v = get("n_outputs")) cfg.n_outputs = std::stoi(*v);
    if (const auto* v = get("entropy_suite")) cfg.entropy_suite = *v;
    if (const auto* v = get("phi_suite")) cfg.phi_suite = *v;
    if (const auto* v = get("mollifier_c")) cfg.mollifier_c = parse_double(*v);
    if (const auto* v = get("record_timing")) cfg.record_timing = (*v == "1" || *v == "true");
    if (const auto* v = get("plot")) cfg.plot = (*v == "1" || *v == "true");
    cfg.validate();
    return cfg;
}

std::map<std::string, std::string> SweepConfig::to_kv() const {
    std::map<std::string, std::string> kv;
    switch (datum) {
        case DatumKind::Gaussian: kv["datum"] = "gaussian"; break;
        case DatumKind::RiemannSmoothed: kv["datum"] = "riemann"; break;
        case DatumKind::Sine: kv["datum"] = "sine"; break;
        case DatumKind::FromFile: kv["datum"] = "file"; break;
    }
    kv["datum_ul"] = format_double(datum_ul);
    kv["datum_ur"] = format_double(datum_ur);
    kv["datum_width"] = format_double(datum_width);
    if (!datum_file.empty()) kv["datum_file"] = datum_file;
    kv["x_min"] = format_double(x_min);
    kv["x_max"] = format_double(x_max);
    kv["n"] = std::to_string(n);
    kv["t_end"] = format_double(t_end);
    kv["eps_list"] = join_list(eps_list);
    kv["regime"] = regime_name(regime);
    kv["alpha"] = format_double(alpha);
    kv["c_regime"] = format_double(c_regime);
    if (!beta_list.empty()) kv["beta_list"] = join_list(beta_list);
    kv["p_list"] = join_list(p_list);
    kv["window_lo"] = format_double(window_lo);
    kv["window_hi"] = format_double(window_hi);
    kv["scheme"] = scheme_name(scheme);
    kv["cfl_safety"] = format_double(cfl_safety);
    kv["n_outputs"] = std::to_string(n_outputs);
    kv["entropy_suite"] = entropy_suite;
    kv["phi_suite"] = phi_suite;
    kv["mollifier_c"] = format_double(mollifier_c);
    kv["record_timing"] = record_timing ? "1" : "0";
    kv["plot"] = plot ? "1" : "0";
    return kv;
}

Field make_datum(const SweepConfig& cfg, const Grid1D& grid) {
    switch (cfg.datum) {
        case DatumKind::Gaussian:
            return Field::from_function(grid, [](double x) { return std::exp(-x * x); });
        case DatumKind::Sine: {
            const double L = grid.length();
            const double x0 = grid.x_min;
            return Field::from_function(
                grid, [=](double x) { return std::sin(2.0 * M_PI * (x - x0) / L); });
        }
        case DatumKind::RiemannSmoothed: {
            // Smoothed step at x = 0; the profile returns to u_l near the
            // right edge so the datum is periodic with quiet boundary cells.
            const double w = cfg.datum_width;
            const double ul = cfg.datum_ul, ur = cfg.datum_ur;
            const double x_down = grid.x_max - 0.06 * grid.length();
            return Field::from_function(grid, [=](double x) {
                const double up = 0.5 * (1.0 + std::tanh(x / w));
                const double down = 0.5 * (1.0 + std::tanh((x_down - x) / w));
                return ul + (ur - ul) * up * down;
            });
        }
        case DatumKind::FromFile: {
            const Csv table = read_csv(cfg.datum_file);
            const int cu = table.column("u");
            if (cu < 0) throw std::runtime_error("datum file lacks a 'u' column");
            if (table.rows.size() != static_cast<std::size_t>(grid.n))
                throw std::runtime_error("datum file row count differs from grid");
            Field u(grid);
            for (int i = 0; i < grid.n; ++i)
                u[i] = parse_double(table.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(cu)]);
            return u;
        }
    }
    throw std::logic_error("make_datum: bad datum kind");
}

Field mollify_initial(const Field& u0, const RegParams& p, double c_m) {
    if (!all_finite(u0)) throw std::invalid_argument("mollify_initial: non-finite datum");
    if (!(c_m > 0.0)) throw std::invalid_argument("mollify_initial: c_m must be positive");
    const Grid1D& g = u0.grid();
    const double h = std::max(4.0 * g.dx, c_m * std::sqrt(p.beta + p.eps * p.eps));
    if (h > g.length() / 4.0)
        throw std::invalid_argument("mollify_initial: mollifier wider than domain/4");

    const int radius = static_cast<int>(std::ceil(h / g.dx));
    std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int j = -radius; j <= radius; ++j) {
        const double v = bump(j * g.dx / h);
        w[static_cast<std::size_t>(j + radius)] = v;
        sum += v;
    }
    for (double& v : w) v /= sum;  // unit discrete mass: constants map to themselves

    const int n = g.n;
    Field out(g);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = -radius; j <= radius; ++j) {
            int k = (i + j) % n;
            if (k < 0) k += n;
            acc += w[static_cast<std::size_t>(j + radius)] * u0[k];
        }
        out[i] = acc;
    }
    return out;
}

double lp_local_error(const Field& u, const Field& v, double p, double lo, double hi) {
    require_same_grid(u, v, "lp_local_error");
    if (!(p >= 1.0 && p < 10.0))
        throw std::invalid_argument("lp_local_error: p must lie in [1, 10)");
    const Grid1D& g = u.grid();
    double s = 0.0;
    int cells = 0;
    for (int i = 0; i < g.n; ++i) {
        const double x = g.center(i);
        if (x < lo || x > hi) continue;
        s += std::pow(std::abs(u[i] - v[i]), p);
        ++cells;
    }
    if (cells == 0) throw std::invalid_argument("lp_local_error: empty window");
    return std::pow(s * g.dx, 1.0 / p);
}

namespace {

SweepRow compute_row(const SweepConfig& cfg, std::size_t idx, const Field& u0, const Field& u_ref,
                     const std::vector<EntropyPair>& pairs, const std::vector<TestFunction>& phis,
                     const std::vector<TestFunction>& weak_phis) {
    const RegParams p = cfg.params_for(idx);
    SweepRow row;
    {
        std::ostringstream id;
        id << "r" << (idx < 10 ? "0" : "") << idx << "_eps" << format_double(p.eps);
        row.run_id = id.str();
    }
    row.eps = p.eps;
    row.beta = p.beta;
    row.regime = regime_name(p.regime);
    row.lp_errors.assign(cfg.p_list.size(), std::numeric_limits<double>::quiet_NaN());

    const Field u0m = mollify_initial(u0, p, cfg.mollifier_c);
    row.mollifier_bound_value = (p.beta + p.eps * p.eps) * l2_norm_sq(diff1(u0m));
    const double bound_limit = 4.0 * l2_norm_sq(u0) / (cfg.mollifier_c * cfg.mollifier_c);
    row.mollifier_bound_ok = row.mollifier_bound_value <= bound_limit;
    row.mollified_l1_distance = lp_local_error(u0m, u0, 1.0, cfg.x_min, cfg.x_max);

    TimeControls tc;
    tc.t_end = cfg.t_end;
    tc.cfl_safety = cfg.cfl_safety;
    tc.scheme = cfg.scheme;
    tc.output_times = uniform_output_times(cfg.t_end, cfg.n_outputs);

    Trajectory traj;
    const auto t_start = std::chrono::steady_clock::now();
    try {
        traj = integrate(u0m, p, tc);
    } catch (const BlowUpError& e) {
        row.blew_up = true;
        row.blow_time = e.t_fail;
        return row;
    }
    if (cfg.record_timing) {
        row.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    }
    row.steps = traj.steps;
    row.support_reached_boundary = traj.support_reached_boundary;
    row.energy = EnergyReport::compute(traj);
    row.max_sup_u = *std::max_element(row.energy.sup_abs.begin(), row.energy.sup_abs.end());

    const auto [wlo, whi] = cfg.window();
    for (std::size_t k = 0; k < cfg.p_list.size(); ++k)
        row.lp_errors[k] = lp_local_error(traj.states.back(), u_ref, cfg.p_list[k], wlo, whi);

    for (const TestFunction& phi : weak_phis) {
        row.weak_residuals.push_back(std::abs(weak_residual(traj, phi, u0)));
        row.weak_residual_max = std::max(row.weak_residual_max, row.weak_residuals.back());
    }

    if (!pairs.empty() && !phis.empty()) {
        row.production = entropy_production_suite(traj, pairs, phis);
        row.max_entropy_production = -std::numeric_limits<double>::infinity();
        for (const auto& per_pair : row.production)
            for (double v : per_pair)
                row.max_entropy_production = std::max(row.max_entropy_production, v);
    }

    for (const Field& u : traj.states) {
        const auto [lhs, rhs] = agmon_bound_check(u);
        if (lhs > rhs + 1e-8) ++row.agmon_violations;
    }
    return row;
}

}  // namespace

ConvergenceReport run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    ConvergenceReport rep;
    rep.cfg = cfg;

    const Grid1D grid = make_grid(cfg.x_min, cfg.x_max, cfg.n);
    const Field u0 = make_datum(cfg, grid);
    const Field u_ref = solve_reference(u0, cfg.t_end);

    const std::vector<EntropyPair> pairs =
        cfg.entropy_suite == "standard" ? standard_entropy_suite() : std::vector<EntropyPair>{};
    const std::vector<TestFunction> phis =
        cfg.phi_suite == "standard" ? standard_phi_suite() : std::vector<TestFunction>{};
    const std::vector<TestFunction> weak_phis =
        cfg.phi_suite == "standard" ? standard_weak_phi_suite() : std::vector<TestFunction>{};
    for (const auto& pr : pairs) rep.pair_ids.push_back(pr.id());
    for (const auto& phi : phis) rep.phi_ids.push_back(phi.id);
    for (const auto& phi : weak_phis) rep.weak_phi_ids.push_back(phi.id);

    const std::size_t n_rows = cfg.eps_list.size();
    rep.rows.resize(n_rows);
    const unsigned workers = std::min<unsigned>(worker_cap(), static_cast<unsigned>(n_rows));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n_rows; ++i)
            rep.rows[i] = compute_row(cfg, i, u0, u_ref, pairs, phis, weak_phis);
    } else {
        for (std::size_t start = 0; start < n_rows; start += workers) {
            std::vector<std::future<SweepRow>> batch;
            const std::size_t stop = std::min(n_rows, start + workers);
            for (std::size_t i = start; i < stop; ++i)
                batch.push_back(std::async(std::launch::async, compute_row, std::cref(cfg), i,
                                           std::cref(u0), std::cref(u_ref), std::cref(pairs),
                                           std::cref(phis), std::cref(weak_phis)));
            for (std::size_t i = start; i < stop; ++i) rep.rows[i] = batch[i - start].get();
        }
    }

    // Fitted log-log rate of each error column against eps.
    for (std::size_t k = 0; k < cfg.p_list.size(); ++k) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (const SweepRow& row : rep.rows) {
            const double err = row.lp_errors[k];
            if (!(err > 0.0) || !std::isfinite(err)) continue;
            const double x = std::log(row.eps), y = std::log(err);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++m;
        }
        rep.fitted_rates.push_back(
            m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx)
                   : std::numeric_limits<double>::quiet_NaN());
    }

    // Harness-level assertions.
    auto fail = [&](const std::string& msg) {
        rep.assertions_ok = false;
        rep.assertion_failures.push_back(msg);
    };
    for (const SweepRow& row : rep.rows) {
        if (!row.mollifier_bound_ok)
            fail(row.run_id + ": mollifier gradient bound violated");
        if (row.agmon_violations > 0)
            fail(row.run_id + ": " + std::to_string(row.agmon_violations) +
                 " Agmon bound violations");
        if (row.blew_up && cfg.regime != Regime::Free)
            fail(row.run_id + ": blow-up at t = " + format_double(row.blow_time) +
                 " in a scaling regime");
    }
    if (cfg.regime == Regime::EpsPower && !rep.rows.empty() && !rep.pair_ids.empty()) {
        double prev = std::numeric_limits<double>::infinity();
        for (const SweepRow& row : rep.rows) {
            if (row.blew_up) continue;
            const double pos = std::max(0.0, row.max_entropy_production);
            if (pos > prev + 1e-12)
                fail(row.run_id + ": positive entropy production increased along the sweep");
            prev = pos;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

void write_sweep_outputs(const ConvergenceReport& rep, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    Csv report;
    report.header = {"run_id", "eps",   "beta",          "regime",
                     "p",      "lp_error", "weak_residual", "max_entropy_production",
                     "max_sup_u", "steps", "wall_seconds"};
    for (const SweepRow& row : rep.rows) {
        for (std::size_t k = 0; k < rep.cfg.p_list.size(); ++k) {
            report.rows.push_back({row.run_id, format_double(row.eps), format_double(row.beta),
                                   row.regime, format_double(rep.cfg.p_list[k]),
                                   format_double(row.lp_errors[k]),
                                   format_double(row.weak_residual_max),
                                   format_double(row.max_entropy_production),
                                   format_double(row.max_sup_u), std::to_string(row.steps),
                                   format_double(row.wall_seconds)});
        }
    }
    write_csv(report, dir / "report.csv");

    auto meta = rep.cfg.to_kv();
    meta["schema"] = "ibsh-report";
    meta["schema_version"] = "1";
    meta["assertions_ok"] = rep.assertions_ok ? "1" : "0";
    {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        meta["written_at"] = buf;  // provenance lives in the sidecar only
    }
    write_kv(meta, dir / "report.csv.meta");

    for (const SweepRow& row : rep.rows) {
        if (row.blew_up) continue;
        Csv energy;
        energy.header = {"run_id", "time",  "l2_sq",  "grad_l2_sq", "u2ux2",  "l6",
                         "l10",    "lap_l2_sq", "grad_l4", "u4ux2",  "u6ux2",  "u8ux2",
                         "u10ux2", "u2uxx2",    "cross_l1", "sup_abs"};
        const EnergyReport& e = row.energy;
        for (std::size_t j = 0; j < e.size(); ++j) {
            energy.rows.push_back(
                {row.run_id, format_double(e.times[j]), format_double(e.l2_sq[j]),
                 format_double(e.grad_l2_sq[j]), format_double(e.u2ux2[j]),
                 format_double(e.l6[j]), format_double(e.l10[j]), format_double(e.lap_l2_sq[j]),
                 format_double(e.grad_l4[j]), format_double(e.u4ux2[j]),
                 format_double(e.u6ux2[j]), format_double(e.u8ux2[j]),
                 format_double(e.u10ux2[j]), format_double(e.u2uxx2[j]),
                 format_double(e.cross_l1[j]), format_double(e.sup_abs[j])});
        }
        write_csv(energy, dir / ("energy_" + row.run_id + ".csv"));
    }

    if (!rep.cfg.plot) return;

    // Error vs eps, log-log, one series per p.
    std::vector<Series> err_series;
    for (std::size_t k = 0; k < rep.cfg.p_list.size(); ++k) {
        Series s;
        s.label = "p = " + format_double(rep.cfg.p_list[k]);
        for (const SweepRow& row : rep.rows) {
            if (row.blew_up || !(row.lp_errors[k] > 0.0)) continue;
            s.x.push_back(row.eps);
            s.y.push_back(row.lp_errors[k]);
        }
        err_series.push_back(std::move(s));
    }
    PlotOptions err_opts;
    err_opts.title = "windowed Lp error vs eps";
    err_opts.x_label = "eps";
    err_opts.y_label = "error";
    err_opts.log_x = err_opts.log_y = true;
    write_svg_lines(dir / "error_vs_eps.svg", err_series, err_opts);

    // Cumulative L2-balance quantity E(t) per run; constant in theory.
    std::vector<Series> e_series;
    for (const SweepRow& row : rep.rows) {
        if (row.blew_up) continue;
        const EnergyReport& e = row.energy;
        Series s;
        s.label = row.run_id;
        double acc2 = 0.0, acc18 = 0.0;
        for (std::size_t j = 0; j < e.size(); ++j) {
            if (j > 0) {
                const double h = e.times[j] - e.times[j - 1];
                acc2 += 0.5 * h * (e.grad_l2_sq[j] + e.grad_l2_sq[j - 1]);
                acc18 += 0.5 * h * (e.u2ux2[j] + e.u2ux2[j - 1]);
            }
            s.x.push_back(e.times[j]);
            s.y.push_back(e.l2_sq[j] + 2.0 * row.eps * acc2 + 18.0 * row.beta * acc18);
        }
        e_series.push_back(std::move(s));
    }
    PlotOptions e_opts;
    e_opts.title = "L2 balance E(t)";
    e_opts.x_label = "t";
    e_opts.y_label = "E";
    write_svg_lines(dir / "e_traces.svg", e_series, e_opts);
}

}  // namespace ibsh
