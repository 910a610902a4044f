#ifndef CBS_GRID_HPP
#define CBS_GRID_HPP

#include <cstddef>
#include <vector>

namespace cbs {

/** Uniform closed grid on [0,1] with m points and spacing h = 1/(m-1). */
struct Grid1D {
    int m = 0;
    double h = 0.0;
    std::vector<double> points;

    Grid1D() = default;
    explicit Grid1D(int m_points);
};

/** Composite trapezoid of samples f on a uniform grid with spacing h. */
double trapezoid(const std::vector<double>& f, double h);
double trapezoid(const double* f, int m, double h);

/** Tensor grid restricted to the triangle T = {0 <= xi <= x <= 1}.
 * Nodes are (x_a, xi_b) with b <= a; storage is triangle-packed so that
 * node (a,b) lives at index a*(a+1)/2 + b. */
struct TriGrid {
    Grid1D axis;

    TriGrid() = default;
    explicit TriGrid(int m_points) : axis(m_points) {}

    int m() const { return axis.m; }
    double h() const { return axis.h; }
    std::size_t node_count() const {
        return static_cast<std::size_t>(axis.m) * (axis.m + 1) / 2;
    }
    std::size_t index(int a, int b) const {
        return static_cast<std::size_t>(a) * (a + 1) / 2 + b;
    }
};

} // namespace cbs

#endif
