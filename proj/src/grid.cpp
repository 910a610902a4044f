#include "cbs/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace cbs {

Grid1D::Grid1D(int m_points) : m(m_points) {
    if (m < 2) throw std::invalid_argument("Grid1D: need at least 2 points, got " + std::to_string(m));
    h = 1.0 / (m - 1);
    points.resize(m);
    for (int j = 0; j < m; ++j) points[j] = j * h;
    points[m - 1] = 1.0;
}

double trapezoid(const double* f, int m, double h) {
    if (m < 2) throw std::invalid_argument("trapezoid: need at least 2 samples");
    double s = 0.5 * (f[0] + f[m - 1]);
    for (int j = 1; j < m - 1; ++j) s += f[j];
    return s * h;
}

double trapezoid(const std::vector<double>& f, double h) {
    return trapezoid(f.data(), static_cast<int>(f.size()), h);
}

} // namespace cbs
