#include "ibsh/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ibsh {

double flux(double u) {
    const double u2 = u * u;
    return -0.6 * u2 * u2 * u;
}

double flux_prime(double u) {
    const double u2 = u * u;
    return -3.0 * u2 * u2;
}

double godunov_flux(double a, double b) {
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    double fa = flux(a);
    double fb = flux(b);
    double fmin = std::min(fa, fb);
    double fmax = std::max(fa, fb);
    // Interior critical points of F (F' = -3 u^4 vanishes at u = 0 only).
    if (lo < 0.0 && 0.0 < hi) {
        fmin = std::min(fmin, flux(0.0));
        fmax = std::max(fmax, flux(0.0));
    }
    return (a <= b) ? fmin : fmax;
}

double rusanov_flux(double a, double b) {
    // |F'| = 3 u^4 attains its maximum over an interval at an endpoint.
    const double s = std::max(std::abs(flux_prime(a)), std::abs(flux_prime(b)));
    return 0.5 * (flux(a) + flux(b)) - 0.5 * s * (b - a);
}

double cfl_dt_fv(const Field& u) {
    double u4max = 0.0;
    for (double v : u.values()) {
        const double v2 = v * v;
        u4max = std::max(u4max, v2 * v2);
    }
    return u.grid().dx / (3.0 * u4max + 1e-30);
}

Field step_fv(const Field& u, double dt, NumericalFlux kind) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_fv: dt must be positive");
    if (dt > cfl_dt_fv(u) * (1.0 + 1e-12))
        throw std::invalid_argument("step_fv: CFL violation, dt exceeds dx / max(3 u^4)");

    const int n = u.size();
    const double lam = dt / u.grid().dx;
    std::vector<double> g(static_cast<std::size_t>(n));  // g[i] = flux at interface i+1/2
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1 == n) ? 0 : i + 1;
        g[i] = (kind == NumericalFlux::Godunov) ? godunov_flux(u[i], u[ip])
                                                : rusanov_flux(u[i], u[ip]);
    }
    Field out(u.grid());
    for (int i = 0; i < n; ++i) {
        const int im = (i == 0) ? n - 1 : i - 1;
        out[i] = u[i] - lam * (g[i] - g[im]);
    }
    return out;
}

namespace {

template <typename StepHook>
void march_fv(const Field& u0, double t_end, double cfl, NumericalFlux kind, StepHook&& hook) {
    if (t_end < 0.0) throw std::invalid_argument("solve_reference: negative t_end");
    Field u = u0;
    double t = 0.0;
    const double t_tol = 1e-12 * std::max(1.0, t_end);
    hook(u, t);
    while (t < t_end - t_tol) {
        double dt = cfl * cfl_dt_fv(u);
        if (t + dt >= t_end - t_tol) dt = t_end - t;
        u = step_fv(u, dt, kind);
        t += dt;
        hook(u, t);
    }
}

}  // namespace

Field solve_reference(const Field& u0, double t_end, double cfl, NumericalFlux kind) {
    Field last = u0;
    march_fv(u0, t_end, cfl, kind, [&](const Field& u, double) { last = u; });
    return last;
}

Trajectory solve_reference_trajectory(const Field& u0, const std::vector<double>& output_times,
                                      double cfl, NumericalFlux kind) {
    if (output_times.empty())
        throw std::invalid_argument("solve_reference_trajectory: no output times");
    if (!std::is_sorted(output_times.begin(), output_times.end()))
        throw std::invalid_argument("solve_reference_trajectory: output times not sorted");

    Trajectory traj;
    const double t_end = output_times.back();
    const double t_tol = 1e-12 * std::max(1.0, t_end);
    Field u = u0;
    double t = 0.0;
    for (double target : output_times) {
        while (t < target - t_tol) {
            double dt = cfl * cfl_dt_fv(u);
            if (t + dt >= target - t_tol) dt = target - t;
            u = step_fv(u, dt, kind);
            t += dt;
            ++traj.steps;
        }
        t = target;
        traj.times.push_back(t);
        traj.states.push_back(u);
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Exact Riemann solver via a sampled envelope.
// ---------------------------------------------------------------------------

namespace {

struct HullPoint {
    int idx;
    double u;
    double f;
};

double cross(const HullPoint& o, const HullPoint& a, const HullPoint& b) {
    return (a.u - o.u) * (b.f - o.f) - (a.f - o.f) * (b.u - o.u);
}

// Lower convex hull of points sorted by u (Andrew monotone chain).
std::vector<HullPoint> lower_hull(const std::vector<HullPoint>& pts) {
    std::vector<HullPoint> hull;
    hull.reserve(pts.size());
    for (const auto& p : pts) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0.0)
            hull.pop_back();
        hull.push_back(p);
    }
    return hull;
}

}  // namespace

RiemannSolution riemann_exact(double u_l, double u_r, int samples) {
    if (!std::isfinite(u_l) || !std::isfinite(u_r))
        throw std::invalid_argument("riemann_exact: non-finite states");
    if (samples < 2) throw std::invalid_argument("riemann_exact: need at least 2 samples");

    RiemannSolution sol;
    sol.u_left = u_l;
    sol.u_right = u_r;
    if (u_l == u_r) return sol;  // constant state, no waves

    const bool increasing = u_l < u_r;  // lower convex envelope if true, else upper concave
    const double a = std::min(u_l, u_r);
    const double b = std::max(u_l, u_r);
    const double du = (b - a) / (samples - 1);
    sol.envelope_spacing = du;

    // The upper concave envelope of F is the lower convex envelope of -F.
    std::vector<HullPoint> pts(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double u = (i + 1 == samples) ? b : a + i * du;
        pts[static_cast<std::size_t>(i)] = {i, u, increasing ? flux(u) : -flux(u)};
    }
    std::vector<HullPoint> hull = lower_hull(pts);

    // Traverse the envelope from u_l to u_r.  For u_l < u_r that is the hull
    // in ascending u; for u_l > u_r it is the hull reversed, and wave speeds
    // come out nondecreasing either way.
    if (!increasing) {
        std::reverse(hull.begin(), hull.end());
        for (auto& h : hull) h.f = -h.f;
    }

    // Hull edges between adjacent samples trace the flux graph itself
    // (rarefaction arcs); edges skipping samples are chords (shocks).
    std::size_t j = 0;
    while (j + 1 < hull.size()) {
        const bool curve_edge = std::abs(hull[j + 1].idx - hull[j].idx) == 1;
        Wave w;
        if (curve_edge) {
            std::size_t k = j;
            while (k + 1 < hull.size() && std::abs(hull[k + 1].idx - hull[k].idx) == 1) ++k;
            w.type = WaveType::Rarefaction;
            w.u_lo = hull[j].u;
            w.u_hi = hull[k].u;
            w.xi.reserve(k - j + 1);
            w.uval.reserve(k - j + 1);
            double prev = -std::numeric_limits<double>::infinity();
            for (std::size_t m = j; m <= k; ++m) {
                double s = flux_prime(hull[m].u);
                if (s < prev) s = prev;  // guard rounding in the fan ordering
                prev = s;
                w.xi.push_back(s);
                w.uval.push_back(hull[m].u);
            }
            w.s_lo = w.xi.front();
            w.s_hi = w.xi.back();
            j = k;
        } else {
            w.type = WaveType::Shock;
            w.u_lo = hull[j].u;
            w.u_hi = hull[j + 1].u;
            const double s = (hull[j + 1].f - hull[j].f) / (hull[j + 1].u - hull[j].u);
            w.s_lo = w.s_hi = s;
            j += 1;
        }
        sol.waves.push_back(std::move(w));
    }
    return sol;
}

double evaluate(const RiemannSolution& sol, double x, double t) {
    if (t <= 0.0) return x < 0.0 ? sol.u_left : sol.u_right;
    if (sol.waves.empty()) return sol.u_left;
    const double xi = x / t;

    double state = sol.u_left;
    for (const Wave& w : sol.waves) {
        if (xi < w.s_lo) return state;
        if (xi <= w.s_hi) {
            if (w.type == WaveType::Shock) return xi < w.s_lo ? w.u_lo : w.u_hi;
            // Rarefaction: invert speed -> state on the sampled arc.
            const auto it = std::upper_bound(w.xi.begin(), w.xi.end(), xi);
            if (it == w.xi.begin()) return w.uval.front();
            if (it == w.xi.end()) return w.uval.back();
            const std::size_t hi = static_cast<std::size_t>(it - w.xi.begin());
            const std::size_t lo = hi - 1;
            const double span = w.xi[hi] - w.xi[lo];
            if (span <= 0.0) return w.uval[lo];
            const double frac = (xi - w.xi[lo]) / span;
            return w.uval[lo] + frac * (w.uval[hi] - w.uval[lo]);
        }
        state = w.u_hi;
    }
    return state;
}

RiemannCheck verify_riemann(const RiemannSolution& sol, int chord_samples) {
    RiemannCheck check;
    check.worst_oleinik_margin = 0.0;

    const double fscale =
        std::max({1.0, std::abs(flux(sol.u_left)), std::abs(flux(sol.u_right))});
    // Chord-side slack for the sampled envelope: near a tangency the true
    // flux may dip past the discrete chord by O(spacing^2 |F''|).
    const double umax = std::max(std::abs(sol.u_left), std::abs(sol.u_right));
    const double oleinik_tol =
        std::max(1e-12, 4.0 * sol.envelope_spacing * sol.envelope_spacing * 12.0 * umax * umax * umax);

    double prev_speed = -std::numeric_limits<double>::infinity();
    const double order_tol = 16.0 * sol.envelope_spacing * 12.0 * std::pow(umax, 3.0) + 1e-12;

    for (const Wave& w : sol.waves) {
        if (w.s_lo < prev_speed - order_tol) check.speeds_ordered = false;
        if (w.s_hi < w.s_lo - order_tol) check.speeds_ordered = false;
        prev_speed = w.s_hi;

        if (w.type != WaveType::Shock) continue;
        const double jump = w.u_hi - w.u_lo;
        const double rh = std::abs(w.s_lo * jump - (flux(w.u_hi) - flux(w.u_lo))) / fscale;
        check.max_rankine_hugoniot_error = std::max(check.max_rankine_hugoniot_error, rh);

        // Oleinik: the flux graph lies above the chord when the fan goes up
        // in u (lower envelope), below it when the fan goes down.
        const bool up = w.u_hi > w.u_lo;
        for (int m = 1; m < chord_samples; ++m) {
            const double v = w.u_lo + jump * m / chord_samples;
            const double chord = flux(w.u_lo) + w.s_lo * (v - w.u_lo);
            const double margin = up ? flux(v) - chord : chord - flux(v);
            check.worst_oleinik_margin = std::min(check.worst_oleinik_margin, margin);
        }
    }

    check.ok = check.speeds_ordered && check.max_rankine_hugoniot_error <= 1e-10 &&
               check.worst_oleinik_margin >= -oleinik_tol;
    return check;
}

}  // namespace ibsh
