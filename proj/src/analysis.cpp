#include "cbs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cbs {

std::vector<double> backstepping_beta(const StateN& s, const KernelsN& kn, const Grid1D& g) {
    if (s.m != g.m || kn.tri.m() != g.m)
        throw std::invalid_argument("backstepping_beta: state m=" + std::to_string(s.m) + ", kernels m=" +
                                    std::to_string(kn.tri.m()) + ", grid m=" + std::to_string(g.m) +
                                    " must all match");
    if (kn.n != s.n)
        throw std::invalid_argument("backstepping_beta: kernels have n=" + std::to_string(kn.n) +
                                    " but state has n=" + std::to_string(s.n));
    const int n = s.n, m = s.m;
    const double inv_n = 1.0 / n;
    std::vector<double> beta(m), integrand(m);
    beta[0] = s.v[0];
    for (int a = 1; a < m; ++a) {
        for (int b = 0; b <= a; ++b) {
            double us = 0.0;
            for (int i = 0; i < n; ++i) us += kn.at(i, a, b) * s.u_at(i, b);
            integrand[b] = inv_n * us + kn.at(n, a, b) * s.v[b];
        }
        beta[a] = s.v[a] - trapezoid(integrand.data(), a + 1, g.h);
    }
    return beta;
}

LyapunovConfig LyapunovConfig::defaults(const ParamsN& pn, const Grid1D& g) {
    double m_lambda = 0.0, m_sigma = 0.0, m_w = 0.0;
    for (double x : g.points) {
        for (int i = 0; i < pn.n; ++i) {
            m_lambda = std::max(m_lambda, 1.0 / pn.lambda[i](x));
            m_w = std::max(m_w, std::abs(pn.w[i](x)));
            double row = 0.0;
            for (int j = 0; j < pn.n; ++j) row += std::abs(pn.sig(i, j)(x));
            m_sigma = std::max(m_sigma, row / pn.n);
        }
    }
    double qterm = 0.0;
    for (double qi : pn.q) qterm += qi * qi;
    qterm /= pn.n;
    LyapunovConfig cfg;
    cfg.delta1 = 1.0 + m_lambda * (m_sigma + m_w);
    double cap_q = qterm > 0.0 ? 1.0 / qterm : std::numeric_limits<double>::infinity();
    double cap_w = m_lambda * m_w > 0.0 ? 1.0 / (m_lambda * m_w) : std::numeric_limits<double>::infinity();
    double cap = std::min(cap_q, cap_w);
    cfg.p = std::isfinite(cap) ? 0.5 * cap : 1.0;
    return cfg;
}

double lyapunov_V(const std::vector<double>& alpha, const std::vector<double>& beta,
                  const ParamsN& pn, const LyapunovConfig& cfg, const Grid1D& g) {
    const int n = pn.n, m = g.m;
    if (alpha.size() != static_cast<std::size_t>(n) * m || beta.size() != static_cast<std::size_t>(m))
        throw std::invalid_argument("lyapunov_V: alpha must be n*m and beta length m");
    if (!(cfg.p > 0.0) || !(cfg.delta1 > 0.0))
        throw std::invalid_argument("lyapunov_V: need p > 0 and delta1 > 0");
    std::vector<double> f(m);
    const double inv_n = 1.0 / n;
    for (int j = 0; j < m; ++j) {
        double x = g.points[j];
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            double a = alpha[static_cast<std::size_t>(i) * m + j];
            s += a * a / pn.lambda[i](x);
        }
        f[j] = cfg.p * std::exp(-cfg.delta1 * x) * inv_n * s + (1.0 + x) / pn.mu(x) * beta[j] * beta[j];
    }
    return trapezoid(f, g.h);
}

double lyapunov_V(const StateN& s, const std::vector<double>& beta, const ParamsN& pn,
                  const LyapunovConfig& cfg, const Grid1D& g) {
    return lyapunov_V(s.u, beta, pn, cfg, g);
}

DecayFit decay_fit(const Trajectory& tr, double t_start) {
    std::vector<double> ts, logs;
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        if (tr.times[k] < t_start) continue;
        double e = tr.enorms[k];
        if (!(e > 0.0))
            throw std::runtime_error("decay_fit: E-norm sample at t=" + std::to_string(tr.times[k]) +
                                     " is not positive (" + std::to_string(e) + ")");
        ts.push_back(tr.times[k]);
        logs.push_back(std::log(e));
    }
    if (ts.size() < 4)
        throw std::runtime_error("decay_fit: only " + std::to_string(ts.size()) +
                                 " samples at t >= " + std::to_string(t_start) + ", need at least 4");
    double n = static_cast<double>(ts.size());
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        st += ts[k];
        sy += logs[k];
        stt += ts[k] * ts[k];
        sty += ts[k] * logs[k];
    }
    double denom = n * stt - st * st;
    double slope = (n * sty - st * sy) / denom;
    double intercept = (sy - slope * st) / n;
    DecayFit fit;
    fit.c = -slope;
    fit.M = std::exp(intercept) / tr.enorms.front();
    fit.t_start = ts.front();
    fit.t_end = ts.back();
    double rss = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        double r = logs[k] - (intercept + slope * ts[k]);
        rss += r * r;
    }
    fit.rms_residual = std::sqrt(rss / n);
    return fit;
}

ControlDistance compare_controls(const Trajectory& a, const Trajectory& b) {
    if (a.times.size() != b.times.size())
        throw std::invalid_argument("compare_controls: trajectories have " +
                                    std::to_string(a.times.size()) + " vs " +
                                    std::to_string(b.times.size()) + " samples");
    for (std::size_t k = 0; k < a.times.size(); ++k)
        if (std::abs(a.times[k] - b.times[k]) > 1e-12)
            throw std::invalid_argument("compare_controls: time grids differ at sample " +
                                        std::to_string(k));
    ControlDistance d;
    std::vector<double> sq(a.times.size());
    for (std::size_t k = 0; k < a.times.size(); ++k) {
        double diff = a.controls[k] - b.controls[k];
        d.sup = std::max(d.sup, std::abs(diff));
        sq[k] = diff * diff;
    }
    if (a.times.size() >= 2) {
        double h = a.times[1] - a.times[0];
        d.l2 = std::sqrt(trapezoid(sq, h));
    }
    return d;
}

std::vector<double> compare_solutions(const Trajectory& tr_n, const Trajectory& tr_c, int n) {
    if (tr_n.meta.n != n)
        throw std::invalid_argument("compare_solutions: trajectory has n=" + std::to_string(tr_n.meta.n) +
                                    ", expected " + std::to_string(n));
    int n_y = tr_c.meta.n;
    if (n_y < n || n_y % n != 0)
        throw std::invalid_argument("compare_solutions: proxy resolution n_y=" + std::to_string(n_y) +
                                    " must be a multiple of n=" + std::to_string(n));
    if (tr_n.meta.m != tr_c.meta.m)
        throw std::invalid_argument("compare_solutions: grids differ, m=" + std::to_string(tr_n.meta.m) +
                                    " vs " + std::to_string(tr_c.meta.m));
    std::size_t count = std::min(tr_n.times.size(), tr_c.times.size());
    for (std::size_t k = 0; k < count; ++k)
        if (std::abs(tr_n.times[k] - tr_c.times[k]) > 1e-12)
            throw std::invalid_argument("compare_solutions: time grids differ at sample " +
                                        std::to_string(k));
    const int r = n_y / n;
    const int m = tr_n.meta.m;
    Grid1D g(m);
    std::vector<double> e(count);
    StateN diff(n, m);
    for (std::size_t k = 0; k < count; ++k) {
        const StateN& a = tr_n.states[k];
        const StateN& c = tr_c.states[k];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) {
                double mean = 0.0;
                for (int kk = 0; kk < r; ++kk) mean += c.u_at(i * r + kk, j);
                mean /= r;
                diff.u_at(i, j) = a.u_at(i, j) - mean;
            }
        for (int j = 0; j < m; ++j) diff.v[j] = a.v[j] - c.v[j];
        e[k] = std::sqrt(inner_product_E(diff, diff, g));
    }
    return e;
}

ContinuumConstants continuum_constants(const ContinuumParams& pc, const ContinuumKernel& kc,
                                       const Grid1D& gx, int n_y) {
    ContinuumConstants cc;
    Grid1D gy(n_y);
    for (double x : gx.points) {
        for (double y : gy.points) {
            cc.m_w = std::max(cc.m_w, std::abs(pc.w(x, y)));
            cc.m_lambda = std::max(cc.m_lambda, 1.0 / pc.lambda(x, y));
            for (double eta : gy.points) cc.m_sigma = std::max(cc.m_sigma, std::abs(pc.sigma(x, y, eta)));
        }
    }
    std::vector<double> slice(n_y);
    for (int a = 0; a < gx.m; ++a)
        for (int b = 0; b <= a; ++b) {
            double x = gx.points[a], xi = gx.points[b];
            kc.slice(x, xi, gy.points.data(), slice.data(), n_y);
            for (double v : slice) cc.m_k = std::max(cc.m_k, std::abs(v));
            cc.m_k = std::max(cc.m_k, std::abs(kc.kbar(x, xi)));
        }
    return cc;
}

} // namespace cbs
