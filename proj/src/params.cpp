#include "ibsh/params.hpp"

#include <algorithm>

namespace ibsh {

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::EpsSquared: return "eps2";
        case Regime::EpsPower: return "eps_power";
        case Regime::Free: return "free";
    }
    return "?";
}

std::string scheme_name(Scheme s) {
    return s == Scheme::ExplicitRK4 ? "rk4" : "imex";
}

namespace {
void check_range(double eps, double beta) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("RegParams: eps must lie in (0, 1)");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("RegParams: beta must lie in (0, 1)");
}
}  // namespace

RegParams RegParams::eps_squared(double eps, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("RegParams: c_regime must be positive");
    RegParams p;
    p.eps = eps;
    p.beta = c * eps * eps;
    p.regime = Regime::EpsSquared;
    p.c_regime = c;
    check_range(p.eps, p.beta);
    return p;
}

RegParams RegParams::eps_power(double eps, double alpha, double c) {
    if (!(alpha > 0.0)) throw std::invalid_argument("RegParams: alpha must be positive");
    if (!(c > 0.0)) throw std::invalid_argument("RegParams: c_regime must be positive");
    RegParams p;
    p.eps = eps;
    p.beta = c * std::pow(eps, 2.0 + alpha);
    p.regime = Regime::EpsPower;
    p.alpha = alpha;
    p.c_regime = c;
    check_range(p.eps, p.beta);
    return p;
}

RegParams RegParams::free_params(double eps, double beta) {
    RegParams p;
    p.eps = eps;
    p.beta = beta;
    p.regime = Regime::Free;
    check_range(p.eps, p.beta);
    return p;
}

void TimeControls::validate() const {
    if (!(t_end > 0.0)) throw std::invalid_argument("TimeControls: t_end must be positive");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
        throw std::invalid_argument("TimeControls: cfl_safety must lie in (0, 1]");
    if (!(dt_max > 0.0)) throw std::invalid_argument("TimeControls: dt_max must be positive");
    if (!std::is_sorted(output_times.begin(), output_times.end()))
        throw std::invalid_argument("TimeControls: output_times must be sorted");
    if (!output_times.empty() &&
        (output_times.front() < 0.0 || output_times.back() > t_end * (1.0 + 1e-12)))
        throw std::invalid_argument("TimeControls: output_times outside [0, t_end]");
}

std::vector<double> uniform_output_times(double t_end, int m) {
    if (m < 2) throw std::invalid_argument("uniform_output_times: need at least 2 times");
    std::vector<double> t(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) t[j] = t_end * j / static_cast<double>(m - 1);
    t.back() = t_end;
    return t;
}

}  // namespace ibsh
