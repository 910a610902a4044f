#ifndef CBS_KERNEL_SOLVER_HPP
#define CBS_KERNEL_SOLVER_HPP

#include <vector>

#include "cbs/grid.hpp"
#include "cbs/params.hpp"

namespace cbs {

/** The n+1 gain kernels k^i(x, xi) tabulated on the triangle T. Channels are
 * 0..n-1 for the rightward states and n for the leftward state; each channel
 * is triangle-packed per TriGrid::index. The diagonal data of channels i < n
 * is imposed exactly: k^i(x,x) = -theta_i(x)/(lambda_i(x) + mu(x)). */
struct KernelsN {
    int n = 0;
    TriGrid tri;
    std::vector<std::vector<double>> k;   // n+1 channels

    double at(int ch, int a, int b) const { return k[ch][tri.index(a, b)]; }
    double& at(int ch, int a, int b) { return k[ch][tri.index(a, b)]; }

    /** Linear interpolation along tabulated row a at abscissa xi in [0, x_a]. */
    double row_value(int ch, int a, double xi) const;

    /** Triangle-aware bilinear interpolation at (x, xi); xi is clamped to x. */
    double value(int ch, double x, double xi) const;

    double max_abs() const;
};

/** Interpolation stencil on the triangle at a fixed (x, xi), reusable across
 * channels: bilinear inside full cells, barycentric in diagonal cells. */
struct TriStencil {
    std::size_t i00 = 0, i10 = 0, i01 = 0, i11 = 0;
    double w00 = 0.0, w10 = 0.0, w01 = 0.0, w11 = 0.0;

    TriStencil(const TriGrid& tri, double x, double xi);
    double apply(const std::vector<double>& channel) const {
        return w00 * channel[i00] + w10 * channel[i10] + w01 * channel[i01] + w11 * channel[i11];
    }
};

struct SolveOptions {
    int max_iter = 100;     // per-row fixed-point sweeps for the xi=0 coupling
    double fp_tol = 1e-12;
    bool parallel = false;
};

/** Solves the exact kernel equations on T by first-order semi-Lagrangian
 * marching in x; see the implementation for the scheme. */
KernelsN solve_exact_kernels(const ParamsN& pn, int m, const SolveOptions& opt = {});

/** Centered-difference residuals of the kernel equations and the defect of
 * the xi = 0 boundary relation, evaluated on the tabulated solution. */
struct ResidualReport {
    double max_interior_u = 0.0;  // rightward-channel equations
    double l2_interior_u = 0.0;
    double max_interior_v = 0.0;  // leftward-channel equation
    double l2_interior_v = 0.0;
    double max_bc_defect = 0.0;   // xi = 0 relation, max over rows
    double kernel_scale = 0.0;    // max |k| over all channels
};
ResidualReport kernel_residual(const KernelsN& kn, const ParamsN& pn);

} // namespace cbs

#endif
