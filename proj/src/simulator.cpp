#include "cbs/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cbs/parallel.hpp"

namespace cbs {

Controller Controller::open(std::function<double(double)> u, std::string tag) {
    Controller c;
    c.open_loop = std::move(u);
    c.tag = std::move(tag);
    return c;
}

Controller Controller::zero() {
    return open([](double) { return 0.0; }, "open-loop");
}

Controller Controller::gain(KernelsN k, std::string tag) {
    Controller c;
    c.gains = std::make_shared<KernelsN>(std::move(k));
    c.tag = std::move(tag);
    return c;
}

namespace {

/** Grid tabulation of the coefficients plus scratch layout for the upwind
 * right-hand side. sig is channel-major: sig[i][j*n + jj] = sigma_{i,jj}(x_j). */
struct SimWorkspace {
    int n, m;
    double h, inv_n;
    bool parallel;
    std::vector<double> lam, w;   // [i*m + j]
    std::vector<double> sig;      // [i*m*n + j*n + jj]
    std::vector<double> th;       // [j*n + jj]
    std::vector<double> mu;       // [j]
    std::vector<double> q;        // [i]
    mutable std::vector<double> uT;  // [j*n + i] transposed state scratch

    SimWorkspace(const ParamsN& pn, const Grid1D& g, bool par)
        : n(pn.n), m(g.m), h(g.h), inv_n(1.0 / pn.n), parallel(par) {
        lam.resize(static_cast<std::size_t>(n) * m);
        w.resize(lam.size());
        sig.resize(static_cast<std::size_t>(n) * m * n);
        th.resize(static_cast<std::size_t>(m) * n);
        mu.resize(m);
        q = pn.q;
        uT.resize(static_cast<std::size_t>(m) * n);
        for (int j = 0; j < m; ++j) {
            double x = g.points[j];
            mu[j] = pn.mu(x);
            for (int i = 0; i < n; ++i) {
                lam[static_cast<std::size_t>(i) * m + j] = pn.lambda[i](x);
                w[static_cast<std::size_t>(i) * m + j] = pn.w[i](x);
                th[static_cast<std::size_t>(j) * n + i] = pn.theta[i](x);
                for (int jj = 0; jj < n; ++jj)
                    sig[(static_cast<std::size_t>(i) * m + j) * n + jj] = pn.sig(i, jj)(x);
            }
        }
    }

    void rhs_into(const StateN& s, double v1, StateN& out) const {
        const double inv_h = 1.0 / h;
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < n; ++i) uT[static_cast<std::size_t>(j) * n + i] = s.u_at(i, j);
        parallel_for(
            n,
            [&](int i) {
                const double* urow = s.u_row(i);
                const double* lrow = lam.data() + static_cast<std::size_t>(i) * m;
                const double* wrow = w.data() + static_cast<std::size_t>(i) * m;
                const double* srow = sig.data() + static_cast<std::size_t>(i) * m * n;
                double* orow = out.u_row(i);
                orow[0] = 0.0;
                for (int j = 1; j < m; ++j) {
                    double dot = 0.0;
                    const double* sj = srow + static_cast<std::size_t>(j) * n;
                    const double* uj = uT.data() + static_cast<std::size_t>(j) * n;
                    for (int jj = 0; jj < n; ++jj) dot += sj[jj] * uj[jj];
                    orow[j] = -lrow[j] * (urow[j] - urow[j - 1]) * inv_h + inv_n * dot + wrow[j] * s.v[j];
                }
            },
            parallel);
        for (int j = 0; j + 1 < m; ++j) {
            double vn = (j == m - 2) ? v1 : s.v[j + 1];
            double dot = 0.0;
            const double* tj = th.data() + static_cast<std::size_t>(j) * n;
            const double* uj = uT.data() + static_cast<std::size_t>(j) * n;
            for (int jj = 0; jj < n; ++jj) dot += tj[jj] * uj[jj];
            out.v[j] = mu[j] * (vn - s.v[j]) * inv_h + inv_n * dot;
        }
        out.v[m - 1] = 0.0;
    }
};

/** Trapezoid feedback with the v(t,1) endpoint treated self-consistently:
 * the quadrature contains v(1) = U itself, so solve the scalar relation
 * U = A + w_end k^v(1,1) U for U. */
double feedback_consistent(const KernelsN& kn, const StateN& s, const Grid1D& g) {
    const int n = kn.n, m = g.m;
    const int a = m - 1;
    const double h = g.h;
    const double inv_n = 1.0 / n;
    double acc = 0.0;
    for (int b = 0; b < m; ++b) {
        double wgt = (b == 0 || b == m - 1) ? 0.5 * h : h;
        double us = 0.0;
        for (int i = 0; i < n; ++i) us += kn.at(i, a, b) * s.u_at(i, b);
        double vterm = (b == m - 1) ? 0.0 : kn.at(n, a, b) * s.v[b];
        acc += wgt * (inv_n * us + vterm);
    }
    double denom = 1.0 - 0.5 * h * kn.at(n, a, a);
    if (std::abs(denom) < 1e-6)
        throw std::runtime_error("feedback: endpoint coupling 1 - (h/2) k^v(1,1) is singular");
    return acc / denom;
}

void check_gain_grid(const KernelsN& kn, int n, const Grid1D& g) {
    if (kn.n != n)
        throw std::invalid_argument("controller gains have n=" + std::to_string(kn.n) +
                                    " but the system has n=" + std::to_string(n));
    if (kn.tri.m() != g.m)
        throw std::invalid_argument("controller gains tabulated on m=" + std::to_string(kn.tri.m()) +
                                    " but the simulation grid has m=" + std::to_string(g.m));
}

} // namespace

StateN rhs(const ParamsN& pn, const StateN& s, const Grid1D& g, double boundary_v1) {
    if (s.n != pn.n || s.m != g.m)
        throw std::invalid_argument("rhs: state is (" + std::to_string(s.n) + "," + std::to_string(s.m) +
                                    ") but system/grid expect (" + std::to_string(pn.n) + "," +
                                    std::to_string(g.m) + ")");
    SimWorkspace ws(pn, g, false);
    StateN out(s.n, s.m);
    ws.rhs_into(s, boundary_v1, out);
    return out;
}

double feedback(const KernelsN& kn, const StateN& s, const Grid1D& g) {
    if (s.m != g.m)
        throw std::invalid_argument("feedback: state has m=" + std::to_string(s.m) + " but grid has m=" +
                                    std::to_string(g.m));
    check_gain_grid(kn, s.n, g);
    const int n = kn.n, m = g.m;
    const int a = m - 1;
    std::vector<double> integrand(m);
    const double inv_n = 1.0 / n;
    for (int b = 0; b < m; ++b) {
        double us = 0.0;
        for (int i = 0; i < n; ++i) us += kn.at(i, a, b) * s.u_at(i, b);
        integrand[b] = inv_n * us + kn.at(n, a, b) * s.v[b];
    }
    return trapezoid(integrand, g.h);
}

double max_speed(const ParamsN& pn, const Grid1D& g) {
    double s = 0.0;
    for (double x : g.points) {
        s = std::max(s, pn.mu(x));
        for (int i = 0; i < pn.n; ++i) s = std::max(s, pn.lambda[i](x));
    }
    return s;
}

double traverse_time(const ParamsN& pn, const Grid1D& g) {
    std::vector<double> f(g.m);
    for (int j = 0; j < g.m; ++j) f[j] = 1.0 / pn.mu(g.points[j]);
    double tv = trapezoid(f, g.h);
    double tu = 0.0;
    for (int i = 0; i < pn.n; ++i) {
        for (int j = 0; j < g.m; ++j) f[j] = 1.0 / pn.lambda[i](g.points[j]);
        tu = std::max(tu, trapezoid(f, g.h));
    }
    return tu + tv;
}

StateN default_initial_state(const ParamsN& pn, const Grid1D& g) {
    StateN s(pn.n, g.m);
    for (int i = 0; i < pn.n; ++i)
        for (int j = 0; j < g.m; ++j) s.u_at(i, j) = pn.q[i];
    for (int j = 0; j < g.m; ++j) s.v[j] = 1.0;
    return s;
}

namespace {

void lincomb(StateN& dst, const StateN& base, double c, const StateN& k) {
    const std::size_t nu = base.u.size(), nv = base.v.size();
    for (std::size_t idx = 0; idx < nu; ++idx) dst.u[idx] = base.u[idx] + c * k.u[idx];
    for (std::size_t idx = 0; idx < nv; ++idx) dst.v[idx] = base.v[idx] + c * k.v[idx];
}

} // namespace

Trajectory simulate(const ParamsN& pn, const Controller& ctrl, const StateN& ic, double t_end,
                    const Grid1D& g, const SimOptions& opt) {
    if (!(t_end > 0.0)) throw std::invalid_argument("simulate: need t_end > 0");
    if (ic.n != pn.n || ic.m != g.m)
        throw std::invalid_argument("simulate: initial state is (" + std::to_string(ic.n) + "," +
                                    std::to_string(ic.m) + ") but system/grid expect (" +
                                    std::to_string(pn.n) + "," + std::to_string(g.m) + ")");
    if (ctrl.gains) check_gain_grid(*ctrl.gains, pn.n, g);
    if (!ctrl.gains && !ctrl.open_loop)
        throw std::invalid_argument("simulate: controller has neither gains nor an open-loop input");

    const double cfl_bound = 0.5 * g.h / max_speed(pn, g);
    double dt_req = opt.dt > 0.0 ? opt.dt : cfl_bound;
    if (dt_req > cfl_bound * (1.0 + 1e-12))
        throw std::invalid_argument("simulate: dt=" + std::to_string(dt_req) +
                                    " violates the CFL bound 0.5 h / max-speed = " +
                                    std::to_string(cfl_bound));
    long steps = static_cast<long>(std::ceil(t_end / dt_req - 1e-12));
    if (steps < 1) steps = 1;
    const double dt = t_end / steps;
    const int stride = opt.save_stride > 0 ? opt.save_stride
                                           : static_cast<int>(std::max<long>(1, (steps + 511) / 512));

    SimWorkspace ws(pn, g, opt.parallel);
    const int m = g.m, n = pn.n;

    auto apply_bc = [&](StateN& s, double t) -> double {
        for (int i = 0; i < n; ++i) s.u_at(i, 0) = ws.q[i] * s.v[0];
        double u_now = ctrl.gains ? feedback_consistent(*ctrl.gains, s, g) : ctrl.open_loop(t);
        s.v[m - 1] = u_now;
        return u_now;
    };

    Trajectory tr;
    tr.meta.n = n;
    tr.meta.m = m;
    tr.meta.dt = dt;
    tr.meta.save_stride = stride;
    tr.meta.controller = ctrl.tag;
    tr.meta.params_hash = params_hash(pn);

    StateN s = ic;
    {
        double u0 = ctrl.gains ? feedback_consistent(*ctrl.gains, s, g) : ctrl.open_loop(0.0);
        tr.times.push_back(0.0);
        tr.controls.push_back(u0);
        tr.enorms.push_back(std::sqrt(inner_product_E(s, s, g)));
        tr.states.push_back(s);
    }

    StateN k1(n, m), k2(n, m), k3(n, m), k4(n, m), stage(n, m);
    for (long step = 1; step <= steps; ++step) {
        double t0 = (step - 1) * dt;
        apply_bc(s, t0);
        ws.rhs_into(s, s.v[m - 1], k1);
        lincomb(stage, s, 0.5 * dt, k1);
        apply_bc(stage, t0 + 0.5 * dt);
        ws.rhs_into(stage, stage.v[m - 1], k2);
        lincomb(stage, s, 0.5 * dt, k2);
        apply_bc(stage, t0 + 0.5 * dt);
        ws.rhs_into(stage, stage.v[m - 1], k3);
        lincomb(stage, s, dt, k3);
        apply_bc(stage, t0 + dt);
        ws.rhs_into(stage, stage.v[m - 1], k4);
        for (std::size_t idx = 0; idx < s.u.size(); ++idx)
            s.u[idx] += (dt / 6.0) * (k1.u[idx] + 2.0 * (k2.u[idx] + k3.u[idx]) + k4.u[idx]);
        for (std::size_t idx = 0; idx < s.v.size(); ++idx)
            s.v[idx] += (dt / 6.0) * (k1.v[idx] + 2.0 * (k2.v[idx] + k3.v[idx]) + k4.v[idx]);
        double t = step * dt;
        double u_now = apply_bc(s, t);
        if (step % stride == 0 || step == steps) {
            double e2 = inner_product_E(s, s, g);
            double e = std::sqrt(e2);
            if (!std::isfinite(e)) {
                tr.meta.blown_up = true;
                break;
            }
            tr.times.push_back(t);
            tr.controls.push_back(u_now);
            tr.enorms.push_back(e);
            tr.states.push_back(s);
            if (e > opt.blowup_norm) {
                tr.meta.blown_up = true;
                break;
            }
        }
    }
    tr.meta.unstable = tr.meta.blown_up || tr.enorms.back() > tr.enorms.front();
    return tr;
}

namespace {

/** Trapezoid of 1/speed over [x0, x1], refined by interval doubling until the
 * change drops below 1e-10. */
double travel(const Fn1& speed, double x0, double x1) {
    if (x1 <= x0) return 0.0;
    auto f = [&](double x) { return 1.0 / speed(x); };
    int n = 8;
    double len = x1 - x0;
    double hh = len / n;
    double acc = 0.5 * (f(x0) + f(x1));
    for (int j = 1; j < n; ++j) acc += f(x0 + j * hh);
    double prev = acc * hh;
    for (int level = 0; level < 22; ++level) {
        double mid = 0.0;
        for (int j = 0; j < n; ++j) mid += f(x0 + (j + 0.5) * hh);
        double cur = 0.5 * prev + 0.5 * hh * mid;
        n *= 2;
        hh *= 0.5;
        if (std::abs(cur - prev) <= 1e-10) return cur;
        prev = cur;
    }
    return prev;
}

/** Solves travel(speed, lo, z) = target for z in [lo, hi] (monotone in z)
 * by safeguarded Newton with derivative 1/speed(z). */
double invert_travel(const Fn1& speed, double lo, double hi, double target) {
    double a = lo, b = hi;
    double z = 0.5 * (a + b);
    for (int it = 0; it < 80; ++it) {
        double val = travel(speed, lo, z) - target;
        if (std::abs(val) <= 1e-10) return z;
        if (val > 0.0) b = z;
        else a = z;
        double step = -val * speed(z);
        double znext = z + step;
        if (!(znext > a && znext < b)) znext = 0.5 * (a + b);
        if (std::abs(znext - z) < 1e-14) return znext;
        z = znext;
    }
    return z;
}

} // namespace

double transport_oracle(const Fn1& speed, const std::function<double(double)>& inflow,
                        const std::function<double(double)>& ic, Direction dir, double t, double x) {
    if (t < 0.0) throw std::invalid_argument("transport_oracle: need t >= 0");
    if (dir == Direction::right) {
        double tau_in = travel(speed, 0.0, x);
        if (t <= tau_in) return ic(invert_travel(speed, 0.0, x, tau_in - t));
        return inflow(t - tau_in);
    }
    double tau_in = travel(speed, x, 1.0);
    if (t <= tau_in) return ic(invert_travel(speed, x, 1.0, t));
    return inflow(t - tau_in);
}

Trajectory simulate_continuum(const ContinuumParams& pc, int n_y, const Controller& ctrl,
                              const Fn2& u0, const Fn1& v0, double t_end, const Grid1D& g,
                              const SimOptions& opt) {
    ParamsN pn = sample_params(pc, n_y);
    StateN ic(n_y, g.m);
    for (int i = 1; i <= n_y; ++i) {
        double yi = static_cast<double>(i) / n_y;
        for (int j = 0; j < g.m; ++j) ic.u_at(i - 1, j) = u0(g.points[j], yi);
    }
    for (int j = 0; j < g.m; ++j) ic.v[j] = v0(g.points[j]);
    Trajectory tr = simulate(pn, ctrl, ic, t_end, g, opt);
    tr.meta.variant = "continuum-proxy";
    return tr;
}

} // namespace cbs
