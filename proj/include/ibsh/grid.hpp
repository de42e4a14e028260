// Uniform periodic 1-D grid, grid functions, and the second-order central
// difference operators used by every solver and monitor in this project.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ibsh {

struct Grid1D {
    double x_min = 0.0;
    double x_max = 1.0;
    int n = 0;
    double dx = 0.0;

    double center(int i) const { return x_min + (i + 0.5) * dx; }
    double length() const { return x_max - x_min; }

    bool operator==(const Grid1D& other) const {
        return x_min == other.x_min && x_max == other.x_max && n == other.n;
    }
    bool operator!=(const Grid1D& other) const { return !(*this == other); }
};

// Periodic topology, cell centers at x_min + (i + 1/2) dx.  Rejects n < 16
// and non-finite bounds.
Grid1D make_grid(double x_min, double x_max, int n);

// Real-valued grid function; the carrier of all solver state.  Value
// semantics: immutable grids make Fields safe to copy and share across
// threads.
class Field {
  public:
    Field() = default;
    explicit Field(const Grid1D& grid, double fill = 0.0)
        : grid_(grid), values_(static_cast<std::size_t>(grid.n), fill) {}

    template <typename F>
    static Field from_function(const Grid1D& grid, F&& f) {
        Field out(grid);
        for (int i = 0; i < grid.n; ++i) out.values_[i] = f(grid.center(i));
        return out;
    }

    const Grid1D& grid() const { return grid_; }
    int size() const { return grid_.n; }

    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return values_[static_cast<std::size_t>(i)]; }

    // Periodic access: index arithmetic mod n.
    double at_wrapped(int i) const {
        const int n = grid_.n;
        int j = i % n;
        if (j < 0) j += n;
        return values_[static_cast<std::size_t>(j)];
    }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double s);

    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(double s, Field a) { return a *= s; }

  private:
    Grid1D grid_;
    std::vector<double> values_;
};

// Throws std::invalid_argument unless a and b live on the identical grid.
void require_same_grid(const Field& a, const Field& b, const char* what);

bool all_finite(const Field& f);

// ---------------------------------------------------------------------------
// Difference operators: second-order central stencils with periodic wrap.
//   diff1: (f_{i+1} - f_{i-1}) / (2 dx)
//   diff2: (f_{i+1} - 2 f_i + f_{i-1}) / dx^2
//   diff3: (f_{i+2} - 2 f_{i+1} + 2 f_{i-1} - f_{i-2}) / (2 dx^3)
// diff1 and diff3 are skew-adjoint, diff2 self-adjoint, w.r.t. the discrete
// inner product below; all three annihilate constants to rounding.
// ---------------------------------------------------------------------------
Field diff1(const Field& f);
Field diff2(const Field& f);
Field diff3(const Field& f);

// Midpoint-rule quadrature Sum(.) dx, the single quadrature used for every
// spatial integral in the project.
double integral(const Field& f);
double inner(const Field& a, const Field& b);  // Sum a_i b_i dx
double l2_norm_sq(const Field& f);
double lp_norm(const Field& f, double p);
double max_abs(const Field& f);

// Trapezoid weights over a (not necessarily uniform) time partition.
std::vector<double> trapezoid_weights(const std::vector<double>& t);

}  // namespace ibsh
