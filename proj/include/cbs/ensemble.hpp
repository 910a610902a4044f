#ifndef CBS_ENSEMBLE_HPP
#define CBS_ENSEMBLE_HPP

#include <functional>
#include <vector>

#include "cbs/grid.hpp"

namespace cbs {

/** State of the n+1 system tabulated on a Grid1D: n rightward channels u^i
 * plus the single leftward channel v. Channel-major storage, u[i*m + j]. */
struct StateN {
    int n = 0, m = 0;
    std::vector<double> u;
    std::vector<double> v;

    StateN() = default;
    StateN(int channels, int points)
        : n(channels), m(points),
          u(static_cast<std::size_t>(channels) * points, 0.0),
          v(points, 0.0) {}

    double& u_at(int i, int j) { return u[static_cast<std::size_t>(i) * m + j]; }
    double u_at(int i, int j) const { return u[static_cast<std::size_t>(i) * m + j]; }
    const double* u_row(int i) const { return u.data() + static_cast<std::size_t>(i) * m; }
    double* u_row(int i) { return u.data() + static_cast<std::size_t>(i) * m; }
};

/** Piecewise-constant function of y on the right-closed cells ((i-1)/n, i/n].
 * The value at y = 0 is fixed to cell 1. */
struct StepFunction {
    std::vector<double> values;

    int n() const { return static_cast<int>(values.size()); }
    int cell(double y) const;
    double operator()(double y) const { return values[cell(y)]; }
    /** Squared L^2([0,1]) norm: (1/n) sum values_i^2, exact. */
    double l2_norm_sq() const;
};

/** Weighted inner product of the state space E:
 * integral of (1/n) sum_i ua_i ub_i + va vb by composite trapezoid on g. */
double inner_product_E(const StateN& a, const StateN& b, const Grid1D& g);

/** Inner product of the continuum state space E_c for tabulated pairs:
 * u is mx-by-my (x-major) on gx x gy, v is on gx. */
double inner_product_Ec(const std::vector<double>& ua, const std::vector<double>& va,
                        const std::vector<double>& ub, const std::vector<double>& vb,
                        const Grid1D& gx, const Grid1D& gy);

/** Isometric lift of a channel vector to a step function of y. */
StepFunction lift(const std::vector<double>& b);

/** Adjoint of the lift: component i is the mean value of g over cell i,
 * each cell integrated by composite trapezoid on q sub-points (q >= 2). */
std::vector<double> project(const std::function<double(double)>& g, int n, int q = 16);

/** Exact cell means of a step function; requires its cell count to be a
 * multiple of n. project(lift(b), n) == b holds exactly. */
std::vector<double> project(const StepFunction& g, int n);

} // namespace cbs

#endif
