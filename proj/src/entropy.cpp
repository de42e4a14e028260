#include "ibsh/entropy.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ibsh {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

constexpr double kQuadTol = 1e-13;
constexpr unsigned kQuadDepth = 15;

// Pairs follow their nominal profile on [-2, 2] and are truncated over
// 2 < |u| < 2.5 with a C-infinity smoothstep in eta'.
constexpr double kWindowEdge = 2.0;
constexpr double kSupportEdge = 2.5;

double smooth_g(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double smooth_g_prime(double x) {
    if (x <= 0.0) return 0.0;
    const double g = std::exp(-1.0 / x);
    return g / (x * x);
}

// s(x): 0 for x <= 0, 1 for x >= 1, C-infinity in between.
double smoothstep(double x) {
    const double g = smooth_g(x);
    const double h = smooth_g(1.0 - x);
    return g / (g + h);
}
double smoothstep_prime(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double g = smooth_g(x);
    const double h = smooth_g(1.0 - x);
    const double gp = smooth_g_prime(x);
    const double hp = -smooth_g_prime(1.0 - x);
    const double den = (g + h) * (g + h);
    return (gp * (g + h) - g * (gp + hp)) / den;
}

double cutoff(double u) {
    const double a = std::abs(u);
    if (a <= kWindowEdge) return 1.0;
    if (a >= kSupportEdge) return 0.0;
    return smoothstep((kSupportEdge - a) / (kSupportEdge - kWindowEdge));
}
double cutoff_prime(double u) {
    const double a = std::abs(u);
    if (a <= kWindowEdge || a >= kSupportEdge) return 0.0;
    const double w = kSupportEdge - kWindowEdge;
    const double s = smoothstep_prime((kSupportEdge - a) / w) / w;
    return u > 0.0 ? -s : s;
}

double q_integrand(const std::function<double(double)>& eta_prime, double xi) {
    const double xi2 = xi * xi;
    return -3.0 * xi2 * xi2 * eta_prime(xi);
}

}  // namespace

double entropy_flux(const std::function<double(double)>& eta_prime, double u) {
    if (!std::isfinite(u)) throw std::invalid_argument("entropy_flux: non-finite u");
    if (u == 0.0) return 0.0;
    auto f = [&](double xi) {
        const double v = q_integrand(eta_prime, xi);
        if (!std::isfinite(v)) throw std::domain_error("entropy_flux: non-finite integrand");
        return v;
    };
    return GK::integrate(f, 0.0, u, kQuadDepth, kQuadTol);
}

// ---------------------------------------------------------------------------
// EntropyPair
// ---------------------------------------------------------------------------

// Cumulative quadrature tables for eta and q on [-3, 3]; eta' has compact
// support inside, so both are constant beyond the table.
struct EntropyPair::Table {
    double lo = -3.0, hi = 3.0;
    int panels = 1024;
    double h = 0.0;
    std::vector<double> eta_at;  // eta(node_j)
    std::vector<double> q_at;    // q(node_j)
};

EntropyPair::EntropyPair(std::string id, PairKind kind, std::function<double(double)> eta_p_base,
                         std::function<double(double)> eta_pp_base, double k, double delta)
    : id_(std::move(id)),
      kind_(kind),
      k_(k),
      delta_(delta),
      eta_p_base_(std::move(eta_p_base)),
      eta_pp_base_(std::move(eta_pp_base)) {
    auto table = std::make_shared<Table>();
    table->h = (table->hi - table->lo) / table->panels;
    table->eta_at.resize(static_cast<std::size_t>(table->panels) + 1);
    table->q_at.resize(static_cast<std::size_t>(table->panels) + 1);

    auto ep = [this](double xi) { return eta_p_base_(xi) * cutoff(xi); };
    auto qi = [&](double xi) {
        const double xi2 = xi * xi;
        return -3.0 * xi2 * xi2 * ep(xi);
    };

    // Anchor the cumulative integrals at 0 so eta(0) = q(0) = 0 exactly.
    const int zero_node = static_cast<int>(std::llround((0.0 - table->lo) / table->h));
    table->eta_at[static_cast<std::size_t>(zero_node)] = 0.0;
    table->q_at[static_cast<std::size_t>(zero_node)] = 0.0;
    for (int j = zero_node + 1; j <= table->panels; ++j) {
        const double a = table->lo + (j - 1) * table->h;
        const double b = table->lo + j * table->h;
        table->eta_at[j] = table->eta_at[j - 1] + GK::integrate(ep, a, b, kQuadDepth, kQuadTol);
        table->q_at[j] = table->q_at[j - 1] + GK::integrate(qi, a, b, kQuadDepth, kQuadTol);
    }
    for (int j = zero_node - 1; j >= 0; --j) {
        const double a = table->lo + j * table->h;
        const double b = table->lo + (j + 1) * table->h;
        table->eta_at[j] = table->eta_at[j + 1] - GK::integrate(ep, a, b, kQuadDepth, kQuadTol);
        table->q_at[j] = table->q_at[j + 1] - GK::integrate(qi, a, b, kQuadDepth, kQuadTol);
    }
    table_ = table;
}

double EntropyPair::eta_prime(double u) const { return eta_p_base_(u) * cutoff(u); }

double EntropyPair::eta_second(double u) const {
    return eta_pp_base_(u) * cutoff(u) + eta_p_base_(u) * cutoff_prime(u);
}

double EntropyPair::eta(double u) const {
    const Table& t = *table_;
    auto ep = [this](double xi) { return eta_prime(xi); };
    if (u <= t.lo) return t.eta_at.front();  // eta' vanishes there
    if (u >= t.hi) return t.eta_at.back();
    const int j = std::min(static_cast<int>((u - t.lo) / t.h), t.panels - 1);
    const double node = t.lo + j * t.h;
    return t.eta_at[static_cast<std::size_t>(j)] + GK::integrate(ep, node, u, kQuadDepth, kQuadTol);
}

double EntropyPair::q(double u) const {
    const Table& t = *table_;
    auto qi = [this](double xi) {
        const double xi2 = xi * xi;
        return -3.0 * xi2 * xi2 * eta_prime(xi);
    };
    if (u <= t.lo) return t.q_at.front();
    if (u >= t.hi) return t.q_at.back();
    const int j = std::min(static_cast<int>((u - t.lo) / t.h), t.panels - 1);
    const double node = t.lo + j * t.h;
    return t.q_at[static_cast<std::size_t>(j)] + GK::integrate(qi, node, u, kQuadDepth, kQuadTol);
}

bool EntropyPair::convex_on(double lo, double hi, int samples) const {
    for (int i = 0; i < samples; ++i) {
        const double u = lo + (hi - lo) * i / (samples - 1);
        if (eta_second(u) < -1e-12) return false;
    }
    return true;
}

EntropyPair make_quadratic_pair() {
    return EntropyPair("quadratic", PairKind::Quadratic, [](double u) { return 2.0 * u; },
                       [](double) { return 2.0; });
}

EntropyPair make_kruzkov_pair(double k, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("make_kruzkov_pair: delta must be positive");
    std::ostringstream id;
    id << "kruzkov_k" << k << "_d" << delta;
    auto ep = [k, delta](double u) { return std::tanh((u - k) / delta); };
    auto epp = [k, delta](double u) {
        const double c = std::cosh((u - k) / delta);
        if (c > 1e150) return 0.0;  // sech^2 underflows
        return 1.0 / (delta * c * c);
    };
    return EntropyPair(id.str(), PairKind::SmoothedKruzkov, ep, epp, k, delta);
}

std::vector<EntropyPair> standard_entropy_suite() {
    std::vector<EntropyPair> suite;
    suite.push_back(make_quadratic_pair());
    for (double k : {-0.5, 0.0, 0.25, 0.75})
        for (double d : {1e-2, 1e-3}) suite.push_back(make_kruzkov_pair(k, d));
    return suite;
}

// ---------------------------------------------------------------------------
// Test functions
// ---------------------------------------------------------------------------

double bump(double s) {
    const double w = s * s - 1.0;
    if (w >= 0.0) return 0.0;
    const double e = 1.0 / w;
    if (e < -700.0) return 0.0;
    return std::exp(e);
}

double bump_prime(double s) {
    const double w = s * s - 1.0;
    if (w >= 0.0) return 0.0;
    const double e = 1.0 / w;
    if (e < -700.0) return 0.0;
    return std::exp(e) * (-2.0 * s / (w * w));
}

double TestFunction::value(double t, double x) const {
    return bump((t - t_center) / t_radius) * bump((x - x_center) / x_radius);
}

double TestFunction::dt(double t, double x) const {
    return bump_prime((t - t_center) / t_radius) / t_radius * bump((x - x_center) / x_radius);
}

double TestFunction::dx(double t, double x) const {
    return bump((t - t_center) / t_radius) * bump_prime((x - x_center) / x_radius) / x_radius;
}

std::vector<TestFunction> standard_phi_suite() {
    return {
        {"prod_a", 0.25, 0.18, 0.25, 0.8},
        {"prod_b", 0.25, 0.18, 0.30, 1.4},
        {"prod_c", 0.30, 0.15, 1.20, 0.7},
    };
}

std::vector<TestFunction> standard_weak_phi_suite() {
    return {
        {"weak_a", 0.10, 0.25, 0.0, 1.2},
        {"weak_b", 0.30, 0.15, -0.2, 0.9},
    };
}

// ---------------------------------------------------------------------------
// Production and weak residual
// ---------------------------------------------------------------------------

namespace {

struct ColumnRange {
    int lo, hi;  // half-open cell index range intersecting the support
};

ColumnRange support_columns(const Grid1D& g, const TestFunction& phi) {
    int lo = static_cast<int>(std::floor((phi.x_lo() - g.x_min) / g.dx)) - 1;
    int hi = static_cast<int>(std::ceil((phi.x_hi() - g.x_min) / g.dx)) + 1;
    lo = std::max(lo, 0);
    hi = std::min(hi, g.n);
    return {lo, hi};
}

void check_support(const Trajectory& traj, const TestFunction& phi, bool require_interior_start,
                   const char* what) {
    if (traj.times.size() < 2) throw std::invalid_argument(std::string(what) + ": trajectory too short");
    const Grid1D& g = traj.grid();
    if (phi.x_lo() < g.x_min || phi.x_hi() > g.x_max)
        throw std::invalid_argument(std::string(what) + ": phi support outside spatial domain");
    const double t0 = traj.times.front();
    const double t1 = traj.times.back();
    const double tol = 1e-12 * std::max(1.0, t1);
    if (require_interior_start && phi.t_lo() < t0 - tol)
        throw std::invalid_argument(std::string(what) + ": phi support starts before the window");
    if (phi.t_hi() > t1 + tol)
        throw std::invalid_argument(std::string(what) + ": phi support extends past the window");
}

int count_samples_in(const std::vector<double>& times, double lo, double hi) {
    int c = 0;
    for (double t : times)
        if (t >= lo && t <= hi) ++c;
    return c;
}

}  // namespace

double entropy_production(const Trajectory& traj, const EntropyPair& pair,
                          const TestFunction& phi) {
    return entropy_production_suite(traj, {pair}, {phi})[0][0];
}

std::vector<std::vector<double>> entropy_production_suite(const Trajectory& traj,
                                                          const std::vector<EntropyPair>& pairs,
                                                          const std::vector<TestFunction>& phis) {
    for (const TestFunction& phi : phis) {
        check_support(traj, phi, /*require_interior_start=*/true, "entropy_production");
        if (count_samples_in(traj.times, phi.t_lo(), phi.t_hi()) < 64)
            throw std::invalid_argument(
                "entropy_production: fewer than 64 output times across phi's time support");
    }

    const Grid1D& g = traj.grid();
    const double dx = g.dx;
    const std::vector<double> wt = trapezoid_weights(traj.times);

    // Union of supports: the per-snapshot eta/q transforms are shared across
    // the phi suite.
    int col_lo = g.n, col_hi = 0;
    for (const TestFunction& phi : phis) {
        const ColumnRange r = support_columns(g, phi);
        col_lo = std::min(col_lo, r.lo);
        col_hi = std::max(col_hi, r.hi);
    }
    if (col_lo >= col_hi) return std::vector<std::vector<double>>(
        pairs.size(), std::vector<double>(phis.size(), 0.0));

    std::vector<std::vector<double>> production(pairs.size(),
                                                std::vector<double>(phis.size(), 0.0));
    std::vector<double> eta_vals(static_cast<std::size_t>(col_hi - col_lo));
    std::vector<double> q_vals(static_cast<std::size_t>(col_hi - col_lo));

    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        const double t = traj.times[j];
        bool any = false;
        for (const TestFunction& phi : phis)
            any = any || (t > phi.t_lo() && t < phi.t_hi());
        if (!any) continue;
        const Field& u = traj.states[j];

        for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
            for (int i = col_lo; i < col_hi; ++i) {
                eta_vals[static_cast<std::size_t>(i - col_lo)] = pairs[pi].eta(u[i]);
                q_vals[static_cast<std::size_t>(i - col_lo)] = pairs[pi].q(u[i]);
            }
            for (std::size_t fi = 0; fi < phis.size(); ++fi) {
                const TestFunction& phi = phis[fi];
                if (!(t > phi.t_lo() && t < phi.t_hi())) continue;
                const ColumnRange r = support_columns(g, phi);
                double acc = 0.0;
                for (int i = r.lo; i < r.hi; ++i) {
                    const double x = g.center(i);
                    acc += eta_vals[static_cast<std::size_t>(i - col_lo)] * phi.dt(t, x) +
                           q_vals[static_cast<std::size_t>(i - col_lo)] * phi.dx(t, x);
                }
                production[pi][fi] -= wt[j] * acc * dx;
            }
        }
    }
    return production;
}

double entropy_production_combination(
    const Trajectory& traj, const EntropyPair& pair,
    const std::vector<std::pair<double, TestFunction>>& weighted_phis) {
    for (const auto& [w, phi] : weighted_phis) {
        (void)w;
        check_support(traj, phi, /*require_interior_start=*/true, "entropy_production");
        if (count_samples_in(traj.times, phi.t_lo(), phi.t_hi()) < 64)
            throw std::invalid_argument(
                "entropy_production: fewer than 64 output times across phi's time support");
    }
    const Grid1D& g = traj.grid();
    const std::vector<double> wt = trapezoid_weights(traj.times);
    double P = 0.0;
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        const double t = traj.times[j];
        const Field& u = traj.states[j];
        double acc = 0.0;
        for (int i = 0; i < g.n; ++i) {
            const double x = g.center(i);
            double dphi_dt = 0.0, dphi_dx = 0.0;
            for (const auto& [w, phi] : weighted_phis) {
                dphi_dt += w * phi.dt(t, x);
                dphi_dx += w * phi.dx(t, x);
            }
            if (dphi_dt == 0.0 && dphi_dx == 0.0) continue;
            acc += pair.eta(u[i]) * dphi_dt + pair.q(u[i]) * dphi_dx;
        }
        P -= wt[j] * acc * g.dx;
    }
    return P;
}

double weak_residual(const Trajectory& traj, const TestFunction& phi, const Field& u0) {
    check_support(traj, phi, /*require_interior_start=*/false, "weak_residual");
    require_same_grid(traj.states.front(), u0, "weak_residual");
    const double t_first = traj.times.front();
    if (std::abs(t_first) > 1e-12)
        throw std::invalid_argument("weak_residual: trajectory must start at t = 0");

    const Grid1D& g = traj.grid();
    const double dx = g.dx;
    const std::vector<double> wt = trapezoid_weights(traj.times);
    const ColumnRange r = support_columns(g, phi);

    double W = 0.0;
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        const double t = traj.times[j];
        if (t < phi.t_lo() || t > phi.t_hi()) continue;
        const Field& u = traj.states[j];
        double acc = 0.0;
        for (int i = r.lo; i < r.hi; ++i) {
            const double x = g.center(i);
            const double v = u[i];
            const double v5 = v * v * v * v * v;
            acc += v * phi.dt(t, x) - 0.6 * v5 * phi.dx(t, x);
        }
        W += wt[j] * acc * dx;
    }
    // Initial-time term of the weak form.
    double init = 0.0;
    for (int i = r.lo; i < r.hi; ++i) init += u0[i] * phi.value(0.0, g.center(i));
    W += init * dx;
    return W;
}

}  // namespace ibsh
