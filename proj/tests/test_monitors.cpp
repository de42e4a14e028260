#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ibsh/monitors.hpp"
#include "ibsh/regularized.hpp"
#include "test_support.hpp"

using namespace ibsh;
using namespace ibsh::test;

namespace {

Trajectory gaussian_run(int n, const RegParams& p, double t_end, int outputs) {
    const Grid1D g = make_grid(-20.0, 20.0, n);
    const Field u0 = Field::from_function(g, [](double x) { return std::exp(-x * x); });
    TimeControls tc;
    tc.t_end = t_end;
    tc.scheme = Scheme::ExplicitRK4;
    tc.output_times = uniform_output_times(t_end, outputs);
    return integrate(u0, p, tc);
}

EnergyReport synthetic_report(double value, double t_end = 0.5, int m = 11) {
    Trajectory traj = constant_trajectory(make_grid(0.0, 1.0, 16), 0.0, t_end, m);
    EnergyReport r = EnergyReport::compute(traj);
    // Overwrite the second-derivative column with a nonzero plateau.
    std::fill(r.lap_l2_sq.begin(), r.lap_l2_sq.end(), value);
    return r;
}

}  // namespace

TEST_CASE("identity residuals vanish exactly on constant trajectories") {
    const Grid1D g = make_grid(-3.0, 3.0, 64);
    const Trajectory traj = constant_trajectory(g, 1.2, 1.0, 21);
    const RegParams p = RegParams::free_params(0.1, 0.01);
    CHECK(lemma21_identity_residual(traj, p).max_abs_residual == 0.0);
    CHECK(lemma22_identity_residual(traj, p).max_abs_residual == 0.0);
}

TEST_CASE("identity residuals need at least 3 uniform samples") {
    const Grid1D g = make_grid(-3.0, 3.0, 64);
    const RegParams p = RegParams::free_params(0.1, 0.01);
    Trajectory two = constant_trajectory(g, 0.0, 1.0, 2);
    CHECK_THROWS_AS((void)lemma21_identity_residual(two, p), std::invalid_argument);
    Trajectory skew = constant_trajectory(g, 0.0, 1.0, 5);
    skew.times[2] += 0.03;
    CHECK_THROWS_AS((void)lemma21_identity_residual(skew, p), std::invalid_argument);
}

TEST_CASE("L2 identity holds with 18 beta and refines at second order; 36 beta does not") {
    const RegParams p = RegParams::free_params(0.1, 0.01);
    const Trajectory coarse = gaussian_run(256, p, 0.25, 51);
    const Trajectory fine = gaussian_run(512, p, 0.25, 51);

    const IdentityResidual r18c = lemma21_identity_residual(coarse, p, 18.0);
    const IdentityResidual r18f = lemma21_identity_residual(fine, p, 18.0);
    CHECK(r18c.max_abs_residual / r18f.max_abs_residual > 3.0);

    // Cumulative quantity E(t) stays near E(0).
    const double e0 = r18f.cumulative.front();
    for (double e : r18f.cumulative) CHECK(std::abs(e - e0) <= 1e-3 * e0);

    const IdentityResidual r36c = lemma21_identity_residual(coarse, p, 36.0);
    const IdentityResidual r36f = lemma21_identity_residual(fine, p, 36.0);
    CHECK(r36f.max_abs_residual > 10.0 * r18f.max_abs_residual);
    CHECK(r36f.max_abs_residual > 0.5 * r36c.max_abs_residual);  // no decrease

    // l2 is nonincreasing along the run.
    const EnergyReport rep = EnergyReport::compute(fine);
    for (std::size_t j = 1; j < rep.size(); ++j)
        CHECK(rep.l2_sq[j] <= rep.l2_sq[j - 1] * (1.0 + 1e-10));
}

TEST_CASE("Lemma 2.2 balance holds with 18 beta and refines; 42/5 beta does not") {
    const RegParams p = RegParams::free_params(0.1, 0.01);
    const Trajectory coarse = gaussian_run(256, p, 0.25, 51);
    const Trajectory fine = gaussian_run(512, p, 0.25, 51);

    const IdentityResidual c18 = lemma22_identity_residual(coarse, p, 18.0);
    const IdentityResidual f18 = lemma22_identity_residual(fine, p, 18.0);
    CHECK(c18.max_abs_residual / f18.max_abs_residual > 3.0);

    const IdentityResidual c42 = lemma22_identity_residual(coarse, p, 42.0 / 5.0);
    const IdentityResidual f42 = lemma22_identity_residual(fine, p, 42.0 / 5.0);
    CHECK(f42.max_abs_residual > 10.0 * f18.max_abs_residual);
    CHECK(f42.max_abs_residual > 0.5 * c42.max_abs_residual);
}

TEST_CASE("agmon bound examples") {
    const Grid1D g = make_grid(0.0, 2.0 * M_PI, 256);
    const auto [z_lhs, z_rhs] = agmon_bound_check(Field(g, 0.0));
    CHECK(z_lhs == 0.0);
    CHECK(z_rhs == 0.0);

    const Field s = Field::from_function(g, [](double x) { return std::sin(x); });
    const auto [lhs, rhs_] = agmon_bound_check(s);
    CHECK(lhs == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(rhs_ == doctest::Approx(2.0 * M_PI).epsilon(1e-3));  // 2 sqrt(pi) sqrt(pi)
    CHECK(lhs <= rhs_ + 1e-8);
}

TEST_CASE("energy report entries are nonnegative and translation invariant") {
    const Grid1D g = make_grid(-4.0, 4.0, 128);
    Trajectory traj;
    traj.times = {0.0, 0.1};
    const Field u = Field::from_function(g, [](double x) { return std::exp(-x * x) + 0.3 * std::sin(x); });
    Field shifted(g);
    for (int i = 0; i < g.n; ++i) shifted[i] = u[(i + 37) % g.n];
    traj.states = {u, u};
    const EnergyReport a = EnergyReport::compute(traj);
    traj.states = {shifted, shifted};
    const EnergyReport b = EnergyReport::compute(traj);

    auto cols = {&EnergyReport::l2_sq, &EnergyReport::grad_l2_sq, &EnergyReport::u2ux2,
                 &EnergyReport::l6,    &EnergyReport::l10,        &EnergyReport::lap_l2_sq,
                 &EnergyReport::grad_l4, &EnergyReport::u4ux2,    &EnergyReport::u6ux2,
                 &EnergyReport::u8ux2, &EnergyReport::u10ux2,     &EnergyReport::u2uxx2,
                 &EnergyReport::cross_l1, &EnergyReport::sup_abs};
    for (auto col : cols) {
        const double va = (a.*col)[0], vb = (b.*col)[0];
        CHECK(va >= 0.0);
        CHECK(std::abs(va - vb) <= 1e-12 * std::max(1.0, std::abs(va)));
    }
}

TEST_CASE("lemma23_trend: single run, mixed regimes, negative control") {
    const RegParams p = RegParams::eps_squared(0.1);
    std::vector<std::pair<RegParams, EnergyReport>> one = {{p, synthetic_report(1.0)}};
    const Lemma23Table single = lemma23_trend(one);
    CHECK(single.rows.size() == 1);
    CHECK(single.bounded);
    CHECK(single.regime_eps_squared);

    std::vector<std::pair<RegParams, EnergyReport>> mixed = {
        {RegParams::eps_squared(0.1), synthetic_report(1.0)},
        {RegParams::free_params(0.05, 0.01), synthetic_report(1.0)}};
    CHECK_THROWS_AS((void)lemma23_trend(mixed), std::invalid_argument);

    // beta held constant while eps -> 0: q3 = beta^2 int |u_xx|^2 / eps blows up.
    std::vector<std::pair<RegParams, EnergyReport>> control;
    for (double eps : {0.1, 0.01, 1e-4})
        control.push_back({RegParams::free_params(eps, 0.3), synthetic_report(1.0)});
    const Lemma23Table flagged = lemma23_trend(control);
    CHECK_FALSE(flagged.regime_eps_squared);
    CHECK_FALSE(flagged.bounded);
    CHECK(flagged.rows.back().q3 > 100.0 * flagged.rows.front().q3);
}

TEST_CASE("lemma23 quantities stay bounded on a real eps-squared pair of runs") {
    std::vector<std::pair<RegParams, EnergyReport>> runs;
    for (double eps : {0.2, 0.1}) {
        const RegParams p = RegParams::eps_squared(eps);
        runs.push_back({p, EnergyReport::compute(gaussian_run(256, p, 0.2, 41))});
    }
    const Lemma23Table table = lemma23_trend(runs);
    CHECK(table.regime_eps_squared);
    CHECK(table.bounded);
}

TEST_CASE("linf_scaling: fitter and preconditions") {
    CHECK_THROWS_AS((void)linf_scaling({{0.1, 1.0}, {0.05, 1.0}}), std::invalid_argument);

    // Bounded sup sweep: slope ~ 0.
    std::vector<std::pair<double, double>> flat;
    for (double b : {0.1, 0.05, 0.025, 0.0125}) flat.push_back({b, 1.0 + 0.01 * b});
    CHECK(std::abs(linf_scaling(flat)) < 0.01);

    // Saturating family sup = beta^(-1/4): slope -0.25.
    std::vector<std::pair<double, double>> sat;
    for (double b : {0.1, 0.05, 0.025, 0.0125}) sat.push_back({b, std::pow(b, -0.25)});
    CHECK(linf_scaling(sat) == doctest::Approx(-0.25).epsilon(1e-10));
}
