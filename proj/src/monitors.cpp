#include "ibsh/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ibsh {

EnergyReport EnergyReport::compute(const Trajectory& traj) {
    EnergyReport r;
    const std::size_t m = traj.times.size();
    r.times = traj.times;
    auto reserve = [&](std::vector<double>& v) { v.reserve(m); };
    reserve(r.l2_sq); reserve(r.grad_l2_sq); reserve(r.u2ux2); reserve(r.l6);
    reserve(r.l10); reserve(r.lap_l2_sq); reserve(r.grad_l4); reserve(r.u4ux2);
    reserve(r.u6ux2); reserve(r.u8ux2); reserve(r.u10ux2); reserve(r.u2uxx2);
    reserve(r.cross_l1); reserve(r.sup_abs);

    for (const Field& u : traj.states) {
        const Field ux = diff1(u);
        const Field uxx = diff2(u);
        const double dx = u.grid().dx;
        double l2 = 0, g2 = 0, a22 = 0, l6 = 0, l10 = 0, lap = 0, g4 = 0;
        double a42 = 0, a62 = 0, a82 = 0, a102 = 0, a2xx2 = 0, cr = 0, sup = 0;
        for (int i = 0; i < u.size(); ++i) {
            const double v = u[i];
            const double v2 = v * v;
            const double v4 = v2 * v2;
            const double g = ux[i];
            const double gg = g * g;
            const double h = uxx[i];
            l2 += v2;
            g2 += gg;
            a22 += v2 * gg;
            l6 += v2 * v4;
            l10 += v2 * v4 * v4;
            lap += h * h;
            g4 += gg * gg;
            a42 += v4 * gg;
            a62 += v2 * v4 * gg;
            a82 += v4 * v4 * gg;
            a102 += v2 * v4 * v4 * gg;
            a2xx2 += v2 * h * h;
            cr += std::abs(g * h);
            sup = std::max(sup, std::abs(v));
        }
        r.l2_sq.push_back(l2 * dx);
        r.grad_l2_sq.push_back(g2 * dx);
        r.u2ux2.push_back(a22 * dx);
        r.l6.push_back(l6 * dx);
        r.l10.push_back(l10 * dx);
        r.lap_l2_sq.push_back(lap * dx);
        r.grad_l4.push_back(g4 * dx);
        r.u4ux2.push_back(a42 * dx);
        r.u6ux2.push_back(a62 * dx);
        r.u8ux2.push_back(a82 * dx);
        r.u10ux2.push_back(a102 * dx);
        r.u2uxx2.push_back(a2xx2 * dx);
        r.cross_l1.push_back(cr * dx);
        r.sup_abs.push_back(sup);
    }
    return r;
}

double EnergyReport::time_integral(const std::vector<double>& column) const {
    if (column.size() != times.size())
        throw std::invalid_argument("EnergyReport::time_integral: column size mismatch");
    const std::vector<double> w = trapezoid_weights(times);
    double s = 0.0;
    for (std::size_t j = 0; j < column.size(); ++j) s += w[j] * column[j];
    return s;
}

namespace {

void require_uniform_times(const std::vector<double>& t, const char* what) {
    if (t.size() < 3) throw std::invalid_argument(std::string(what) + ": fewer than 3 samples");
    const double h = t[1] - t[0];
    for (std::size_t j = 1; j + 1 < t.size(); ++j)
        if (std::abs((t[j + 1] - t[j]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw std::invalid_argument(std::string(what) + ": output times not uniform");
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& t,
                                         const std::vector<double>& f) {
    std::vector<double> c(t.size(), 0.0);
    for (std::size_t j = 1; j < t.size(); ++j)
        c[j] = c[j - 1] + 0.5 * (t[j] - t[j - 1]) * (f[j] + f[j - 1]);
    return c;
}

IdentityResidual build_residual(const std::vector<double>& t, const std::vector<double>& quantity,
                                const std::vector<double>& dissipation) {
    IdentityResidual out;
    const double h = t[1] - t[0];
    out.initial_value = quantity.front();
    for (std::size_t j = 1; j + 1 < t.size(); ++j) {
        const double dq = (quantity[j + 1] - quantity[j - 1]) / (2.0 * h);
        const double res = dq + dissipation[j];
        out.times.push_back(t[j]);
        out.residual.push_back(res);
        out.max_abs_residual = std::max(out.max_abs_residual, std::abs(res));
    }
    const std::vector<double> cum = cumulative_trapezoid(t, dissipation);
    out.cumulative.resize(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) out.cumulative[j] = quantity[j] + cum[j];
    return out;
}

}  // namespace

IdentityResidual lemma21_identity_residual(const Trajectory& traj, const RegParams& p,
                                           double u2ux2_coeff) {
    require_uniform_times(traj.times, "lemma21_identity_residual");
    const EnergyReport r = EnergyReport::compute(traj);
    std::vector<double> dissipation(r.size());
    for (std::size_t j = 0; j < r.size(); ++j)
        dissipation[j] = 2.0 * p.eps * r.grad_l2_sq[j] + u2ux2_coeff * p.beta * r.u2ux2[j];
    return build_residual(r.times, r.l2_sq, dissipation);
}

IdentityResidual lemma22_identity_residual(const Trajectory& traj, const RegParams& p,
                                           double u6ux2_coeff) {
    require_uniform_times(traj.times, "lemma22_identity_residual");
    const EnergyReport r = EnergyReport::compute(traj);
    std::vector<double> quantity(r.size());
    std::vector<double> dissipation(r.size());
    const double b = p.beta, e = p.eps;
    for (std::size_t j = 0; j < r.size(); ++j) {
        quantity[j] = 0.5 * b * r.grad_l2_sq[j] + 0.1 * r.l6[j];
        dissipation[j] = b * e * r.lap_l2_sq[j] + 3.0 * e * r.u4ux2[j] +
                         3.0 * b * b * r.u2uxx2[j] + u6ux2_coeff * b * r.u6ux2[j] +
                         3.0 * b * b * r.grad_l4[j];
    }
    return build_residual(r.times, quantity, dissipation);
}

std::pair<double, double> agmon_bound_check(const Field& u) {
    double m = 0.0;
    for (double v : u.values()) m = std::max(m, v * v);
    const double rhs = 2.0 * std::sqrt(l2_norm_sq(u)) * std::sqrt(l2_norm_sq(diff1(u)));
    return {m, rhs};
}

Lemma23Table lemma23_trend(const std::vector<std::pair<RegParams, EnergyReport>>& runs,
                           double slack) {
    if (runs.empty()) throw std::invalid_argument("lemma23_trend: no runs");
    const Regime regime = runs.front().first.regime;
    for (const auto& [p, rep] : runs) {
        if (p.regime != regime)
            throw std::invalid_argument("lemma23_trend: mixed scaling regimes rejected");
        if (rep.size() < 2) throw std::invalid_argument("lemma23_trend: report too short");
    }

    Lemma23Table table;
    table.regime_eps_squared = (regime == Regime::EpsSquared);
    for (const auto& [p, r] : runs) {
        Lemma23Row row;
        row.eps = p.eps;
        row.beta = p.beta;
        const double e = p.eps, b = p.beta;
        row.q1 = 0.1 * r.l10.back() + 1.5 * e * e * r.grad_l2_sq.back() +
                 45.0 * e * e * b * r.time_integral(r.grad_l4) +
                 4.0 * e * r.time_integral(r.u8ux2) +
                 0.5 * e * e * e * r.time_integral(r.lap_l2_sq) +
                 15.0 * b * e * e * r.time_integral(r.u2uxx2) +
                 48.0 * b * r.time_integral(r.u10ux2);
        row.q2 = b * r.time_integral(r.cross_l1);
        row.q3 = b * b * r.time_integral(r.lap_l2_sq) / e;
        table.rows.push_back(row);
    }

    // No-blow-up check against the coarsest-eps run (the first after sorting
    // by eps descending; inputs are expected in that order already).
    std::size_t coarsest = 0;
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        if (table.rows[i].eps > table.rows[coarsest].eps) coarsest = i;
    const double floor_q = 1e-12;
    auto ratio = [&](double v, double base) { return v / std::max(base, floor_q); };
    for (const Lemma23Row& row : table.rows) {
        const double r1 = ratio(row.q1, table.rows[coarsest].q1);
        const double r2 = ratio(row.q2, table.rows[coarsest].q2);
        const double r3 = ratio(row.q3, table.rows[coarsest].q3);
        table.worst_ratio = std::max({table.worst_ratio, r1, r2, r3});
    }
    table.bounded = table.worst_ratio <= slack;
    return table;
}

double linf_scaling(const std::vector<std::pair<double, double>>& beta_and_max_sup) {
    std::vector<double> betas;
    for (const auto& [b, s] : beta_and_max_sup) {
        if (!(b > 0.0) || !(s > 0.0))
            throw std::invalid_argument("linf_scaling: beta and sup must be positive");
        betas.push_back(b);
    }
    std::sort(betas.begin(), betas.end());
    betas.erase(std::unique(betas.begin(), betas.end()), betas.end());
    if (betas.size() < 3)
        throw std::invalid_argument("linf_scaling: need at least 3 distinct beta values");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(beta_and_max_sup.size());
    for (const auto& [b, s] : beta_and_max_sup) {
        const double x = std::log(b), y = std::log(s);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ibsh
