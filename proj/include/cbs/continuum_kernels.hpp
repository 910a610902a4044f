#ifndef CBS_CONTINUUM_KERNELS_HPP
#define CBS_CONTINUUM_KERNELS_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cbs/kernel_solver.hpp"

namespace cbs {

/** The continuum kernel pair: k(x,xi,y) on T x [0,1] and kbar(x,xi) on T.
 * k_slice fills a whole y-slice at fixed (x,xi) so that per-point work
 * (interpolation weights, shared exponentials) is paid once per slice. */
struct ContinuumKernel {
    std::function<double(double, double, double)> k;
    std::function<double(double, double)> kbar;
    std::function<void(double, double, const double*, double*, int)> k_slice;

    struct Provenance {
        std::string kind = "closed-form";  // or "numeric"
        int n_y = 0, m = 0;
    } provenance;

    std::shared_ptr<const KernelsN> numeric;  // set for numeric provenance

    void slice(double x, double xi, const double* ys, double* out, int count) const;
};

/** Closed-form continuum kernel of the worked example:
 * k(x,xi,y) = 35 y(y-1) e^{2 xi kbar}, kbar = 35/(2 pi^2). */
ContinuumKernel example_kernel();

/** Numeric continuum kernel: samples the fields at n_y ensemble points,
 * solves the resulting exact kernel system, and exposes the step-function
 * lift in y with linear interpolation in (x, xi). */
ContinuumKernel solve_continuum_kernels(const ContinuumParams& pc, int n_y, int m,
                                        const SolveOptions& opt = {});

/** Underlying tabulation of a numeric continuum kernel (empty for closed form). */
const KernelsN* numeric_tabulation(const ContinuumKernel& kc);

/** Finite-difference residuals of the continuum kernel equations on an
 * m-point triangle with n_y ensemble samples (trapezoid in y and eta). */
struct ContinuumResidualReport {
    double max_interior_k = 0.0;   // rightward kernel equation
    double l2_interior_k = 0.0;
    double max_interior_kbar = 0.0;
    double l2_interior_kbar = 0.0;
    double max_diag_defect = 0.0;  // k(x,x,y) + theta/(lambda+mu)
    double max_bc_defect = 0.0;    // xi = 0 relation for kbar
    double kernel_scale = 0.0;
};
ContinuumResidualReport continuum_residual(const ContinuumKernel& kc, const ContinuumParams& pc,
                                           int m, int n_y);

/** Approximate gains per the sampling rule: channel i <= n takes
 * k(x,xi,i/n), the leftward channel takes kbar. */
KernelsN sample_kernel(const ContinuumKernel& kc, int n, const TriGrid& tri);

/** Just the x = 1 gains, which is all the approximate feedback law reads.
 * This is the piece whose cost stays essentially flat in n, so convergence
 * studies time it rather than the full-triangle tabulation. */
struct GainRow {
    int n = 0;
    Grid1D axis;
    std::vector<double> data;  // node-major: data[b*(n+1) + ch]

    double at(int ch, int b) const { return data[static_cast<std::size_t>(b) * (n + 1) + ch]; }
};
GainRow sample_gain_row(const ContinuumKernel& kc, int n, const Grid1D& g);

/** Gap between exact and sampled gains along the x = 1 row. */
struct DeltaReport {
    std::vector<double> per_channel;     // sup_xi |dk^i(1,xi)|, i = 1..n+1
    double max_inf_with_v = 0.0;         // max_xi max_i |dk^i|, all n+1 channels
    double max_inf_without_v = 0.0;      // rightward channels only
    double e_aggregate = 0.0;            // max_xi sqrt((1/n) sum dk_i^2 + dk_v^2)
};
DeltaReport kernel_delta(const KernelsN& exact, const KernelsN& approx);
DeltaReport kernel_delta(const KernelsN& exact, const GainRow& approx);

} // namespace cbs

#endif
