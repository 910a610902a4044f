#include "cbs/ensemble.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cbs {

int StepFunction::cell(double y) const {
    int nn = n();
    int i = static_cast<int>(std::ceil(y * nn));
    if (i < 1) i = 1;
    if (i > nn) i = nn;
    return i - 1;
}

double StepFunction::l2_norm_sq() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s / n();
}

double inner_product_E(const StateN& a, const StateN& b, const Grid1D& g) {
    if (a.n != b.n || a.m != b.m)
        throw std::invalid_argument("inner_product_E: shape mismatch, a is (" + std::to_string(a.n) +
                                    "," + std::to_string(a.m) + ") but b is (" + std::to_string(b.n) +
                                    "," + std::to_string(b.m) + ")");
    if (a.m != g.m)
        throw std::invalid_argument("inner_product_E: state has m=" + std::to_string(a.m) +
                                    " but grid has m=" + std::to_string(g.m));
    std::vector<double> w(a.m);
    double inv_n = 1.0 / a.n;
    for (int j = 0; j < a.m; ++j) {
        double s = 0.0;
        for (int i = 0; i < a.n; ++i) s += a.u_at(i, j) * b.u_at(i, j);
        w[j] = inv_n * s + a.v[j] * b.v[j];
    }
    return trapezoid(w, g.h);
}

double inner_product_Ec(const std::vector<double>& ua, const std::vector<double>& va,
                        const std::vector<double>& ub, const std::vector<double>& vb,
                        const Grid1D& gx, const Grid1D& gy) {
    std::size_t expect_u = static_cast<std::size_t>(gx.m) * gy.m;
    if (ua.size() != expect_u || ub.size() != expect_u || va.size() != static_cast<std::size_t>(gx.m) ||
        vb.size() != static_cast<std::size_t>(gx.m))
        throw std::invalid_argument("inner_product_Ec: tabulation shapes do not match the grids");
    std::vector<double> w(gx.m);
    std::vector<double> row(gy.m);
    for (int jx = 0; jx < gx.m; ++jx) {
        const double* pa = ua.data() + static_cast<std::size_t>(jx) * gy.m;
        const double* pb = ub.data() + static_cast<std::size_t>(jx) * gy.m;
        for (int jy = 0; jy < gy.m; ++jy) row[jy] = pa[jy] * pb[jy];
        w[jx] = trapezoid(row, gy.h) + va[jx] * vb[jx];
    }
    return trapezoid(w, gx.h);
}

StepFunction lift(const std::vector<double>& b) {
    if (b.empty()) throw std::invalid_argument("lift: empty channel vector");
    return StepFunction{b};
}

std::vector<double> project(const std::function<double(double)>& g, int n, int q) {
    if (n < 1) throw std::invalid_argument("project: need n >= 1");
    if (q < 2) throw std::invalid_argument("project: need q >= 2 quadrature points per cell");
    std::vector<double> out(n);
    std::vector<double> f(q);
    double cell_h = 1.0 / n;
    double sub_h = cell_h / (q - 1);
    for (int i = 0; i < n; ++i) {
        double y0 = i * cell_h;
        for (int k = 0; k < q; ++k) f[k] = g(y0 + k * sub_h);
        out[i] = n * trapezoid(f, sub_h);
    }
    return out;
}

std::vector<double> project(const StepFunction& g, int n) {
    if (n < 1) throw std::invalid_argument("project: need n >= 1");
    int ny = g.n();
    if (ny % n != 0)
        throw std::invalid_argument("project: step function has " + std::to_string(ny) +
                                    " cells, not a multiple of n=" + std::to_string(n));
    int r = ny / n;
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = 0; k < r; ++k) s += g.values[i * r + k];
        out[i] = s / r;
    }
    return out;
}

} // namespace cbs
