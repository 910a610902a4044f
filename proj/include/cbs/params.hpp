#ifndef CBS_PARAMS_HPP
#define CBS_PARAMS_HPP

#include <memory>
#include <string>
#include <vector>

#include "cbs/fields.hpp"
#include "cbs/grid.hpp"

namespace cbs {

/** Coefficient data of the n+1 system: per-channel transport speeds
 * lambda_i > 0, the leftward speed mu > 0, in-domain couplings sigma_{i,j},
 * W_i, theta_i, and boundary reflections q_i. All in-domain sums over
 * channels carry a 1/n factor. */
struct ParamsN {
    int n = 0;
    std::vector<Fn1> lambda;      // n
    Fn1 mu;
    std::vector<Fn1> sigma;       // n*n, sigma[i*n + j] = sigma_{i,j}
    std::vector<Fn1> w;           // n
    std::vector<Fn1> theta;       // n
    std::vector<double> q;        // n

    const Fn1& sig(int i, int j) const { return sigma[static_cast<std::size_t>(i) * n + j]; }
};

/** y-indexed coefficient fields of the continuum system. */
struct ContinuumParams {
    Fn2 lambda;   // lambda(x,y), dfx carries d/dx when known analytically
    Fn1 mu;
    Fn3 sigma;    // sigma(x,y,eta)
    Fn2 w;
    Fn2 theta;
    Fn1 q;        // q(y)
};

/** Piecewise-constant-in-y view of a ParamsN: y-cell i carries channel i,
 * (y,eta)-cell (i,j) carries sigma_{i,j}. Cells are right-closed. */
struct StepParams {
    std::shared_ptr<const ParamsN> src;

    int n() const { return src->n; }
    int cell(double y) const;
    double lambda(double x, double y) const { return src->lambda[cell(y)](x); }
    double w(double x, double y) const { return src->w[cell(y)](x); }
    double theta(double x, double y) const { return src->theta[cell(y)](x); }
    double sigma(double x, double y, double eta) const { return src->sig(cell(y), cell(eta))(x); }
    double q(double y) const { return src->q[cell(y)]; }
    double mu(double x) const { return src->mu(x); }
};

/** Positivity margins required of the transport speeds. */
struct ValidationOptions {
    int check_m = 257;
    double eps = 1e-12;
};

/** Checks lambda_i > 0 and mu > 0 on the check grid; throws naming the
 * offending channel and location. */
void validate_params(const ParamsN& pn, const ValidationOptions& opt = {});

/** Samples a continuum family at y = i/n (and eta = j/n for sigma). */
ParamsN sample_params(const ContinuumParams& pc, int n, const ValidationOptions& opt = {});

/** Step-function lift of the n+1 coefficients. */
StepParams lift_params(const ParamsN& pn);
StepParams lift_params(std::shared_ptr<const ParamsN> pn);

/** The built-in worked example of the n+1 family ("allkrs-example"):
 * lambda_i = mu = 1, sigma_{i,j}(x) = x^3(x+1)(i/n-1/2)(j/n-1/2),
 * W_i(x) = x(x+1)e^x(i/n-1/2), theta_i(x) = -70 e^{35x/pi^2}(i/n)(i/n-1),
 * q_i = cos(2 pi i/n). */
ParamsN example_params_n(int n);

/** Continuum counterpart of the worked example; matches example_params_n(n)
 * at y = i/n for every n. */
ContinuumParams example_params_continuum();

/** Continuum extension of a ParamsN through the interpolation basis
 * p_i(y) = prod_{k != i} (k/n - y)/((k - i)/n) + b sin(n pi y).
 * Matches the source exactly at y = i/n for any b. Capped at n <= 12 since
 * the basis degrades numerically beyond that. */
ContinuumParams interpolate_params(const ParamsN& pn, double b);

/** The five step-approximation distances: max over x of the L^2-in-y (and
 * L^2-in-(y,eta) for sigma) gaps, plus the L^2 gap of q. */
struct ParamErrorReport {
    double lambda = 0.0, sigma = 0.0, theta = 0.0, w = 0.0, q = 0.0;
};
ParamErrorReport param_error(const ContinuumParams& pc, const StepParams& sp, const Grid1D& g,
                             int q_sub = 8);

/** JSON parameter files: {"n": int, "mu": field, "lambda": [fields],
 * "sigma": [[fields]], "w": [fields], "theta": [fields], "q": [reals]},
 * field = {"x": [...], "values": [...]} with linear interpolation. */
ParamsN load_params_json(const std::string& path);
void save_params_json(const std::string& path, const ParamsN& pn, int samples = 33);

/** Resolves a CLI parameter source: the built-in name "allkrs-example"
 * (requires n) or a JSON file path. */
ParamsN params_from_source(const std::string& source, int n);

/** Deterministic FNV-1a hash of the coefficient data on a probe grid. */
std::string params_hash(const ParamsN& pn);

} // namespace cbs

#endif
