// Regularization parameters (eps, beta), their scaling regimes, time-stepping
// controls, and the sampled trajectory record.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ibsh/grid.hpp"

namespace ibsh {

// Scaling regime tying beta to eps.  EpsSquared: beta = c eps^2.
// EpsPower: beta = c eps^(2+alpha), alpha > 0.  Free: beta chosen
// independently of eps.
enum class Regime { EpsSquared, EpsPower, Free };

std::string regime_name(Regime r);

struct RegParams {
    double eps = 0.0;       // diffusion coefficient, 0 < eps < 1
    double beta = 0.0;      // dispersion coefficient, 0 < beta < 1
    Regime regime = Regime::Free;
    double alpha = 0.0;     // exponent for EpsPower
    double c_regime = 1.0;  // implied constant in beta = c eps^2 or c eps^(2+alpha)

    static RegParams eps_squared(double eps, double c = 1.0);
    static RegParams eps_power(double eps, double alpha, double c = 1.0);
    static RegParams free_params(double eps, double beta);
};

enum class Scheme { ExplicitRK4, IMEX };

std::string scheme_name(Scheme s);

struct TimeControls {
    double t_end = 0.0;
    double cfl_safety = 0.8;           // in (0, 1]
    Scheme scheme = Scheme::ExplicitRK4;
    std::vector<double> output_times;  // sorted, within [0, t_end]
    double dt_max = 1e-2;              // cap keeping output sampling accurate

    void validate() const;
};

// Evenly spaced output times 0 = t_0 < ... < t_{m-1} = t_end.
std::vector<double> uniform_output_times(double t_end, int m);

// Discrete sample of a solution: states at the recorded output times, all on
// one grid.  params is absent for hyperbolic reference runs.
struct Trajectory {
    std::vector<double> times;
    std::vector<Field> states;
    std::optional<RegParams> params;
    long long steps = 0;
    // Set when a boundary cell exceeded 1e-8 * max|u| at any recorded time,
    // i.e. the solution support reached the periodic wrap.
    bool support_reached_boundary = false;

    const Grid1D& grid() const {
        if (states.empty()) throw std::logic_error("Trajectory::grid: empty trajectory");
        return states.front().grid();
    }
    std::size_t size() const { return times.size(); }
};

}  // namespace ibsh
