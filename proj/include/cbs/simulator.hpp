#ifndef CBS_SIMULATOR_HPP
#define CBS_SIMULATOR_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cbs/ensemble.hpp"
#include "cbs/kernel_solver.hpp"
#include "cbs/params.hpp"

namespace cbs {

/** Time series of the semi-discrete state with the applied control. */
struct Trajectory {
    std::vector<double> times;
    std::vector<double> controls;
    std::vector<double> enorms;
    std::vector<StateN> states;

    struct Meta {
        int n = 0, m = 0;
        double dt = 0.0;
        int save_stride = 1;
        std::string controller;
        std::string params_hash;
        std::string variant = "n+1";  // or "continuum-proxy"
        bool blown_up = false;
        bool unstable = false;
    } meta;
};

/** Either an open-loop input U(t) or a state-feedback through gain kernels
 * (whose x = 1 row must live on the simulation grid). */
struct Controller {
    std::function<double(double)> open_loop;
    std::shared_ptr<const KernelsN> gains;
    std::string tag;

    static Controller open(std::function<double(double)> u, std::string tag = "open-loop");
    static Controller zero();
    static Controller gain(KernelsN k, std::string tag);
};

/** Upwind semi-discretization of the plant: u^i transports rightward
 * (backward differences), v leftward (forward differences, with
 * boundary_v1 = v(t,1) as the inflow neighbor of the last interior node).
 * Rows held by boundary conditions get zero derivative. */
StateN rhs(const ParamsN& pn, const StateN& s, const Grid1D& g, double boundary_v1);

/** Feedback law: U = integral of (1/n) sum_i k^i(1,xi) u^i(xi)
 * + k^{n+1}(1,xi) v(xi), composite trapezoid on g. */
double feedback(const KernelsN& kn, const StateN& s, const Grid1D& g);

struct SimOptions {
    double dt = 0.0;        // 0: the CFL bound 0.5 h / max-speed
    int save_stride = 0;    // 0: about 512 saved samples
    bool parallel = false;
    double blowup_norm = 1e12;
};

/** Fixed-step classical RK4 in time; U is evaluated from the current state
 * at every stage; boundary rows are enforced algebraically. Terminates early
 * with a partial trajectory if the E-norm exceeds blowup_norm. */
Trajectory simulate(const ParamsN& pn, const Controller& ctrl, const StateN& ic, double t_end,
                    const Grid1D& g, const SimOptions& opt = {});

/** The paper-style initial state u^i = q_i, v = 1. */
StateN default_initial_state(const ParamsN& pn, const Grid1D& g);

enum class Direction { right, left };

/** Exact characteristics solution of the pure transport equation with a
 * spatially varying positive speed: rightward waves enter at x = 0, leftward
 * waves at x = 1. Travel times are integrated by adaptive trapezoid
 * refinement to 1e-10. */
double transport_oracle(const Fn1& speed, const std::function<double(double)>& inflow,
                        const std::function<double(double)>& ic, Direction dir, double t, double x);

/** Runs the n_y-sampled system with initial data sampled from continuum
 * fields u0(x,y), v0(x); the trajectory is tagged continuum-proxy. */
Trajectory simulate_continuum(const ContinuumParams& pc, int n_y, const Controller& ctrl,
                              const Fn2& u0, const Fn1& v0, double t_end, const Grid1D& g,
                              const SimOptions& opt = {});

/** Largest transport speed of the system on the grid. */
double max_speed(const ParamsN& pn, const Grid1D& g);

/** Time for boundary actuation to traverse both transport directions,
 * max_i int dx/lambda_i + int dx/mu on the grid. */
double traverse_time(const ParamsN& pn, const Grid1D& g);

} // namespace cbs

#endif
