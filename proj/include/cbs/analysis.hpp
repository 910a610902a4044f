#ifndef CBS_ANALYSIS_HPP
#define CBS_ANALYSIS_HPP

#include <vector>

#include "cbs/continuum_kernels.hpp"
#include "cbs/simulator.hpp"

namespace cbs {

/** Target state beta(x) = v(x) - integral over [0,x] of
 * (1/n) sum_i k^i(x,xi) u^i(xi) + k^{n+1}(x,xi) v(xi), trapezoid per row.
 * Needs the full kernel triangle on the state grid. */
std::vector<double> backstepping_beta(const StateN& s, const KernelsN& kn, const Grid1D& g);

struct LyapunovConfig {
    double p = 1.0;
    double delta1 = 1.0;

    /** Defaults built from grid sup-norm proxies of the coupling sizes:
     * delta1 = 1 + M_lambda(M_sigma + M_W), p = 0.5 min(1/mean q_i^2,
     * 1/(M_lambda M_W)); both overridable. */
    static LyapunovConfig defaults(const ParamsN& pn, const Grid1D& g);
};

/** Lyapunov functional V = int p e^{-delta1 x} (1/n) sum alpha_i^2/lambda_i
 * + int (1+x)/mu beta^2, trapezoid on g. */
double lyapunov_V(const std::vector<double>& alpha, const std::vector<double>& beta,
                  const ParamsN& pn, const LyapunovConfig& cfg, const Grid1D& g);
double lyapunov_V(const StateN& s, const std::vector<double>& beta, const ParamsN& pn,
                  const LyapunovConfig& cfg, const Grid1D& g);

/** Least-squares exponential envelope of the E-norm history. */
struct DecayFit {
    double M = 0.0;       // overshoot coefficient, exp(intercept)/norm(0)
    double c = 0.0;       // decay rate, minus the fitted slope
    double t_start = 0.0, t_end = 0.0;
    double rms_residual = 0.0;
};
DecayFit decay_fit(const Trajectory& tr, double t_start);

/** sup and L^2 distance of two control histories on a shared time grid. */
struct ControlDistance {
    double sup = 0.0;
    double l2 = 0.0;
};
ControlDistance compare_controls(const Trajectory& a, const Trajectory& b);

/** E-norm gap between an n-channel trajectory and the cell means of a
 * continuum-proxy trajectory at resolution n_y (a multiple of n). */
std::vector<double> compare_solutions(const Trajectory& tr_n, const Trajectory& tr_c, int n);

/** Grid sup-norm estimates of the continuum coupling constants. The kappa, c
 * and inverse-kernel constants depend on target-system data this library does
 * not reconstruct, so they are reported unavailable. */
struct ContinuumConstants {
    double m_sigma = 0.0;       // max_x sup |sigma|
    double m_w = 0.0;           // max_x sup |W|
    double m_lambda = 0.0;      // max_x sup 1/lambda
    double m_k = 0.0;           // sup of |k| and |kbar| over the triangle
    bool kappa_available = false;
    bool c_available = false;
    bool l_available = false;
};
ContinuumConstants continuum_constants(const ContinuumParams& pc, const ContinuumKernel& kc,
                                       const Grid1D& gx, int n_y);

} // namespace cbs

#endif
