// Entropy-correct reference solver for the limit conservation law
//
//   du/dt + dF/dx = 0,   F(u) = -(3/5) u^5,
//
// with a Godunov finite-volume scheme and an exact Riemann solver for the
// nonconvex quintic flux (F'' = -12 u^3 changes sign at u = 0), built on a
// sampled convex/concave envelope.
#pragma once

#include <vector>

#include "ibsh/grid.hpp"
#include "ibsh/params.hpp"

namespace ibsh {

double flux(double u);        // -0.6 u^5
double flux_prime(double u);  // -3 u^4

enum class NumericalFlux { Godunov, Rusanov };

// Godunov interface flux via the general envelope formula: minimum of F over
// [a, b] when a <= b, maximum over [b, a] otherwise, with interior critical
// points of F included among the candidates.  Since F' <= 0 this always
// equals flux(b); the shortcut is asserted as a property, not assumed.
double godunov_flux(double a, double b);

// Local Lax-Friedrichs flux, available as a cross-check behind a flag.
double rusanov_flux(double a, double b);

// Advective CFL bound dx / max(3 u^4).
double cfl_dt_fv(const Field& u);

// One conservative update u_i -= (dt/dx)(G(u_i, u_{i+1}) - G(u_{i-1}, u_i))
// with periodic wrap.  Rejects dt above the CFL bound before stepping.
Field step_fv(const Field& u, double dt, NumericalFlux kind = NumericalFlux::Godunov);

// Repeated step_fv at CFL-limited dt until t_end, landing exactly.
Field solve_reference(const Field& u0, double t_end, double cfl = 0.9,
                      NumericalFlux kind = NumericalFlux::Godunov);

// Same, recording states at the requested output times (params absent).
Trajectory solve_reference_trajectory(const Field& u0, const std::vector<double>& output_times,
                                      double cfl = 0.9,
                                      NumericalFlux kind = NumericalFlux::Godunov);

// ---------------------------------------------------------------------------
// Exact Riemann solution, self-similar in xi = x/t.
// ---------------------------------------------------------------------------

enum class WaveType { Shock, Rarefaction };

struct Wave {
    WaveType type;
    double u_lo = 0.0;  // state adjacent on the slow (left) side
    double u_hi = 0.0;  // state adjacent on the fast (right) side
    double s_lo = 0.0;  // slowest speed of the wave
    double s_hi = 0.0;  // fastest speed (== s_lo for shocks)
    // Rarefaction profile samples: xi nondecreasing, uval the state carried
    // at that similarity speed.
    std::vector<double> xi;
    std::vector<double> uval;
};

struct RiemannSolution {
    double u_left = 0.0;
    double u_right = 0.0;
    std::vector<Wave> waves;  // ordered by nondecreasing speed
    double envelope_spacing = 0.0;  // sample spacing used by the construction
};

// Waves read off the lower convex envelope of F on [u_l, u_r] (u_l < u_r) or
// the upper concave envelope on [u_r, u_l] (u_l > u_r).  The envelope is a
// discrete hull over `samples` uniform points; composite shock-rarefaction
// waves emerge from the hull, with no per-case analysis.
RiemannSolution riemann_exact(double u_l, double u_r, int samples = 4097);

double evaluate(const RiemannSolution& sol, double x, double t);

struct RiemannCheck {
    double max_rankine_hugoniot_error = 0.0;
    double worst_oleinik_margin = 0.0;  // most negative chord-side violation
    bool speeds_ordered = true;
    bool ok = false;
};

// Post-verification: Rankine-Hugoniot on every shock, Oleinik chord
// inequalities on a dense sample of states per shock, and fan ordering.
RiemannCheck verify_riemann(const RiemannSolution& sol, int chord_samples = 10000);

}  // namespace ibsh
