// Entropy-entropy flux pairs, smooth space-time test functions, discrete
// entropy production, and the distributional-solution residual of the limit
// conservation law.
#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ibsh/grid.hpp"
#include "ibsh/params.hpp"

namespace ibsh {

// q(u) = -int_0^u 3 xi^4 eta'(xi) dxi by adaptive Gauss-Kronrod quadrature,
// absolute tolerance ~1e-12.
double entropy_flux(const std::function<double(double)>& eta_prime, double u);

enum class PairKind { Quadratic, SmoothedKruzkov, UserTable };

// C^2 entropy eta with derivatives and its flux q.  All pairs in the
// standard suite agree with their nominal profile on [-2, 2] and are taken
// smoothly to zero slope over 2 < |u| < 2.5, so eta', eta'' are bounded with
// compact support.  q is evaluated from a cached cumulative quadrature
// table; instances are immutable after construction and safe to share
// across threads.
class EntropyPair {
  public:
    EntropyPair(std::string id, PairKind kind, std::function<double(double)> eta_p_base,
                std::function<double(double)> eta_pp_base, double k = 0.0, double delta = 0.0);

    const std::string& id() const { return id_; }
    PairKind kind() const { return kind_; }
    double kruzkov_k() const { return k_; }
    double kruzkov_delta() const { return delta_; }

    double eta(double u) const;
    double eta_prime(double u) const;
    double eta_second(double u) const;
    double q(double u) const;

    // eta'' >= 0 sampled densely on [lo, hi].
    bool convex_on(double lo, double hi, int samples = 2001) const;

  private:
    struct Table;
    std::string id_;
    PairKind kind_;
    double k_ = 0.0, delta_ = 0.0;
    std::function<double(double)> eta_p_base_, eta_pp_base_;
    std::shared_ptr<const Table> table_;
};

EntropyPair make_quadratic_pair();
EntropyPair make_kruzkov_pair(double k, double delta);

// eta(u) = u^2 and smoothed Kruzkov pairs at k in {-0.5, 0, 0.25, 0.75},
// delta in {1e-2, 1e-3}.
std::vector<EntropyPair> standard_entropy_suite();

// Smooth compactly supported tensor bump
//   phi(t, x) = b((t - t_center)/t_radius) b((x - x_center)/x_radius),
// b(s) = exp(1/(s^2 - 1)) on |s| < 1, with analytic derivatives.
struct TestFunction {
    std::string id;
    double t_center = 0.0, t_radius = 1.0;
    double x_center = 0.0, x_radius = 1.0;

    double value(double t, double x) const;
    double dt(double t, double x) const;
    double dx(double t, double x) const;

    double t_lo() const { return t_center - t_radius; }
    double t_hi() const { return t_center + t_radius; }
    double x_lo() const { return x_center - x_radius; }
    double x_hi() const { return x_center + x_radius; }
};

double bump(double s);
double bump_prime(double s);

// Nonnegative production bumps and weak-residual test functions, both laid
// out for the canonical sweep window ([-5, 5] x [0, 0.5]).
std::vector<TestFunction> standard_phi_suite();
std::vector<TestFunction> standard_weak_phi_suite();

// P = -sum_t sum_x (eta(u) dphi/dt + q(u) dphi/dx) dx dt (midpoint in x,
// trapezoid in t).  phi must vanish at the initial time and hold its support
// inside the computed window, sampled by at least 64 output times.  The
// entropy inequality corresponds to P <= 0 up to discretization error.
double entropy_production(const Trajectory& traj, const EntropyPair& pair,
                          const TestFunction& phi);

// Per-(pair, phi) production matrix; shares the eta/q transforms of each
// snapshot across the phi suite.
std::vector<std::vector<double>> entropy_production_suite(const Trajectory& traj,
                                                          const std::vector<EntropyPair>& pairs,
                                                          const std::vector<TestFunction>& phis);

// Production against the weighted combination sum_k w_k phi_k, evaluated in
// one quadrature pass; equals the weighted sum of productions (linearity).
double entropy_production_combination(
    const Trajectory& traj, const EntropyPair& pair,
    const std::vector<std::pair<double, TestFunction>>& weighted_phis);

// W = sum_t sum_x (u dphi/dt - (3/5) u^5 dphi/dx) dx dt
//     + sum_x u0 phi(0, x) dx,
// the distance of the sampled run from distributional-solution status of the
// limit equation.  u0 is the (unmollified) datum; phi need not be sign
// constrained and may be supported down to t = 0.
double weak_residual(const Trajectory& traj, const TestFunction& phi, const Field& u0);

}  // namespace ibsh
