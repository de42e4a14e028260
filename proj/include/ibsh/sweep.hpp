// Orchestration of the singular-limit experiment: mollified initial data,
// regularized solves across an (eps_n, beta_n) sequence, comparison to the
// entropy-solution reference in windowed L^p norms, and aggregation of the
// energy/entropy reports.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ibsh/grid.hpp"
#include "ibsh/monitors.hpp"
#include "ibsh/params.hpp"

namespace ibsh {

enum class DatumKind { Gaussian, RiemannSmoothed, Sine, FromFile };

struct SweepConfig {
    DatumKind datum = DatumKind::Gaussian;
    double datum_ul = 0.0;     // RiemannSmoothed left state
    double datum_ur = 1.0;     // RiemannSmoothed right state
    double datum_width = 0.05; // RiemannSmoothed transition width
    std::string datum_file;    // FromFile profile path

    double x_min = -5.0, x_max = 5.0;
    int n = 1024;
    double t_end = 0.5;

    std::vector<double> eps_list;   // strictly decreasing
    Regime regime = Regime::EpsSquared;
    double alpha = 0.5;             // EpsPower exponent
    double c_regime = 1.0;
    std::vector<double> beta_list;  // Free regime only, parallel to eps_list

    std::vector<double> p_list{1.0};  // exponents in [1, 10)
    double window_lo = 0.0, window_hi = 0.0;  // 0,0 selects the central half

    Scheme scheme = Scheme::IMEX;
    double cfl_safety = 0.8;
    int n_outputs = 129;

    std::string entropy_suite = "standard";  // or "none"
    std::string phi_suite = "standard";      // or "none"
    double mollifier_c = 1.0;

    bool record_timing = false;  // keeps emitted CSV byte-deterministic when off
    bool plot = false;

    void validate() const;
    std::pair<double, double> window() const;  // resolved window bounds
    RegParams params_for(std::size_t row) const;

    static SweepConfig from_file(const std::filesystem::path& path);
    std::map<std::string, std::string> to_kv() const;
};

Field make_datum(const SweepConfig& cfg, const Grid1D& grid);

// Discrete convolution with a normalized C-infinity bump of half-width
// h = max(4 dx, c_m sqrt(beta + eps^2)); rejects mollifiers wider than a
// quarter of the domain.  The (1.9)-type gradient bound
// (beta + eps^2)|du0/dx|^2 <= 4 |u0|^2 / c_m^2 is asserted by the harness,
// not assumed.
Field mollify_initial(const Field& u0, const RegParams& p, double c_m = 1.0);

// (sum_{x_i in [lo, hi]} |u_i - v_i|^p dx)^(1/p).
double lp_local_error(const Field& u, const Field& v, double p, double lo, double hi);

struct SweepRow {
    std::string run_id;
    double eps = 0.0, beta = 0.0;
    std::string regime;
    bool blew_up = false;
    double blow_time = 0.0;
    bool support_reached_boundary = false;
    bool mollifier_bound_ok = true;
    double mollifier_bound_value = 0.0;  // (beta + eps^2) |du0m/dx|^2
    double mollified_l1_distance = 0.0;  // |u0m - u0|_L1, trend datum for (1.9)
    std::vector<double> lp_errors;       // parallel to cfg.p_list
    std::vector<double> weak_residuals;  // |W| per weak-suite phi
    double weak_residual_max = 0.0;
    std::vector<std::vector<double>> production;  // pair x phi
    double max_entropy_production = 0.0;
    double max_sup_u = 0.0;
    int agmon_violations = 0;
    long long steps = 0;
    double wall_seconds = 0.0;
    EnergyReport energy;
};

struct ConvergenceReport {
    SweepConfig cfg;
    std::vector<SweepRow> rows;          // ordered by eps descending
    std::vector<double> fitted_rates;    // log-log slope of error vs eps, per p
    std::vector<std::string> pair_ids;
    std::vector<std::string> phi_ids;
    std::vector<std::string> weak_phi_ids;
    bool assertions_ok = true;
    std::vector<std::string> assertion_failures;
};

// Deterministic function of cfg; rows run concurrently (IBSH_THREADS caps
// the worker count) and are reduced in order.
ConvergenceReport run_sweep(const SweepConfig& cfg);

// report.csv, energy_<runid>.csv and (optionally) SVG plots under dir.
void write_sweep_outputs(const ConvergenceReport& report, const std::filesystem::path& dir);

}  // namespace ibsh
