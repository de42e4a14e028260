#include "ibsh/grid.hpp"

#include <algorithm>
#include <limits>

namespace ibsh {

Grid1D make_grid(double x_min, double x_max, int n) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max))
        throw std::invalid_argument("make_grid: non-finite bounds");
    if (!(x_max > x_min))
        throw std::invalid_argument("make_grid: x_max must exceed x_min");
    if (n < 16)
        throw std::invalid_argument("make_grid: n below minimum of 16 (got " +
                                    std::to_string(n) + ")");
    Grid1D g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n = n;
    g.dx = (x_max - x_min) / n;
    return g;
}

void require_same_grid(const Field& a, const Field& b, const char* what) {
    if (a.grid() != b.grid())
        throw std::invalid_argument(std::string(what) + ": fields on different grids");
}

Field& Field::operator+=(const Field& other) {
    require_same_grid(*this, other, "Field::operator+=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    require_same_grid(*this, other, "Field::operator-=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

Field& Field::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

bool all_finite(const Field& f) {
    for (double v : f.values())
        if (!std::isfinite(v)) return false;
    return true;
}

Field diff1(const Field& f) {
    const int n = f.size();
    const double inv2dx = 1.0 / (2.0 * f.grid().dx);
    Field out(f.grid());
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1 == n) ? 0 : i + 1;
        const int im = (i == 0) ? n - 1 : i - 1;
        out[i] = (f[ip] - f[im]) * inv2dx;
    }
    return out;
}

Field diff2(const Field& f) {
    const int n = f.size();
    const double invdx2 = 1.0 / (f.grid().dx * f.grid().dx);
    Field out(f.grid());
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1 == n) ? 0 : i + 1;
        const int im = (i == 0) ? n - 1 : i - 1;
        out[i] = (f[ip] - 2.0 * f[i] + f[im]) * invdx2;
    }
    return out;
}

Field diff3(const Field& f) {
    const int n = f.size();
    const double dx = f.grid().dx;
    const double inv2dx3 = 1.0 / (2.0 * dx * dx * dx);
    Field out(f.grid());
    for (int i = 0; i < n; ++i) {
        const int ip1 = (i + 1) % n;
        const int ip2 = (i + 2) % n;
        const int im1 = (i + n - 1) % n;
        const int im2 = (i + n - 2) % n;
        out[i] = (f[ip2] - 2.0 * f[ip1] + 2.0 * f[im1] - f[im2]) * inv2dx3;
    }
    return out;
}

double integral(const Field& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s * f.grid().dx;
}

double inner(const Field& a, const Field& b) {
    require_same_grid(a, b, "inner");
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * a.grid().dx;
}

double l2_norm_sq(const Field& f) { return inner(f, f); }

double lp_norm(const Field& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    double s = 0.0;
    for (double v : f.values()) s += std::pow(std::abs(v), p);
    return std::pow(s * f.grid().dx, 1.0 / p);
}

double max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> trapezoid_weights(const std::vector<double>& t) {
    const std::size_t m = t.size();
    std::vector<double> w(m, 0.0);
    if (m < 2) return w;
    for (std::size_t j = 0; j + 1 < m; ++j) {
        const double h = t[j + 1] - t[j];
        w[j] += 0.5 * h;
        w[j + 1] += 0.5 * h;
    }
    return w;
}

}  // namespace ibsh
