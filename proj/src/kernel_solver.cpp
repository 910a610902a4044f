#include "cbs/kernel_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cbs/parallel.hpp"

/*
 * The gain kernels satisfy, on T = {0 <= xi <= x <= 1},
 *
 *   mu(x) k^i_x  - lambda_i(xi) k^i_xi  = lambda_i'(xi) k^i
 *        + (1/n) sum_j sigma_{j,i}(xi) k^j + theta_i(xi) k^{n+1},   i <= n,
 *   mu(x) k^v_x  + mu(xi) k^v_xi        = -mu'(xi) k^v
 *        + (1/n) sum_j W_j(xi) k^j,                                 (v = n+1)
 *
 * with k^i(x,x) = -theta_i(x)/(lambda_i(x)+mu(x)) on the diagonal and
 * mu(0) k^v(x,0) = (1/n) sum_j q_j lambda_j(0) k^j(x,0) at xi = 0.
 *
 * Marching in x with step h, each row is filled semi-Lagrangianly: the value
 * at (x+h, xi_b) is carried along the local characteristic
 * d(xi)/dx = -lambda_i(xi)/mu(x) (resp. +mu(xi)/mu(x)) back to the previous
 * row, or to the diagonal / the xi=0 edge when the trace exits the triangle
 * in between, where the boundary data applies. Source terms are accumulated
 * by one explicit Euler step using previous-row values at the target node.
 * The xi=0 relation couples the v-channel to the same row's k^j(x,0); the
 * rightward channels are filled first, so one fixed-point application
 * resolves it, and the remaining defect is checked against fp_tol.
 */

namespace cbs {

double KernelsN::row_value(int ch, int a, double xi) const {
    if (a == 0) return k[ch][0];
    const double h = tri.h();
    int j = static_cast<int>(std::floor(xi / h));
    if (j > a - 1) j = a - 1;
    if (j < 0) j = 0;
    double frac = xi / h - j;
    if (frac < 0.0) frac = 0.0;
    if (frac > 1.0) frac = 1.0;
    const double* row = k[ch].data() + tri.index(a, 0);
    return (1.0 - frac) * row[j] + frac * row[j + 1];
}

TriStencil::TriStencil(const TriGrid& tri, double x, double xi) {
    const int m = tri.m();
    const double h = tri.h();
    if (xi > x) xi = x;
    if (x < 0.0) x = 0.0;
    if (x > 1.0) x = 1.0;
    if (xi < 0.0) xi = 0.0;
    int a = static_cast<int>(std::floor(x / h));
    if (a > m - 2) a = m - 2;
    int b = static_cast<int>(std::floor(xi / h));
    if (b > a) b = a;
    double fa = std::clamp(x / h - a, 0.0, 1.0);
    double fb = std::clamp(xi / h - b, 0.0, 1.0);
    i00 = tri.index(a, b);
    i10 = tri.index(a + 1, b);
    if (b + 1 <= a) {
        i01 = tri.index(a, b + 1);
        i11 = tri.index(a + 1, b + 1);
        w00 = (1.0 - fa) * (1.0 - fb);
        w01 = (1.0 - fa) * fb;
        w10 = fa * (1.0 - fb);
        w11 = fa * fb;
    } else {
        // diagonal cell: barycentric on (a,b), (a+1,b), (a+1,b+1)
        if (fb > fa) fb = fa;
        i01 = i00;
        i11 = tri.index(a + 1, b + 1);
        w00 = 1.0 - fa;
        w01 = 0.0;
        w10 = fa - fb;
        w11 = fb;
    }
}

double KernelsN::value(int ch, double x, double xi) const {
    return TriStencil(tri, x, xi).apply(k[ch]);
}

double KernelsN::max_abs() const {
    double s = 0.0;
    for (const auto& ch : k)
        for (double v : ch) s = std::max(s, std::abs(v));
    return s;
}

namespace {

struct Tabulated {
    int n, m;
    std::vector<double> lam, dlam, th, wv;    // [i*m + b]
    std::vector<double> sigT;                 // [b*n*n + i*n + j] = sigma_{j,i}(xi_b)
    std::vector<double> muv, dmu;             // [b]
    std::vector<double> qlam0;                // q_j lambda_j(0) / (n mu(0))

    Tabulated(const ParamsN& pn, const Grid1D& g) : n(pn.n), m(g.m) {
        lam.resize(static_cast<std::size_t>(n) * m);
        dlam.resize(lam.size());
        th.resize(lam.size());
        wv.resize(lam.size());
        sigT.resize(static_cast<std::size_t>(m) * n * n);
        muv.resize(m);
        dmu.resize(m);
        for (int b = 0; b < m; ++b) {
            double x = g.points[b];
            muv[b] = pn.mu(x);
            dmu[b] = pn.mu.d(x);
            for (int i = 0; i < n; ++i) {
                lam[static_cast<std::size_t>(i) * m + b] = pn.lambda[i](x);
                dlam[static_cast<std::size_t>(i) * m + b] = pn.lambda[i].d(x);
                th[static_cast<std::size_t>(i) * m + b] = pn.theta[i](x);
                wv[static_cast<std::size_t>(i) * m + b] = pn.w[i](x);
            }
            double* s = sigT.data() + static_cast<std::size_t>(b) * n * n;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s[static_cast<std::size_t>(i) * n + j] = pn.sig(j, i)(x);
        }
        qlam0.resize(n);
        for (int j = 0; j < n; ++j) qlam0[j] = pn.q[j] * pn.lambda[j](0.0) / (n * pn.mu(0.0));
    }
};

double diag_bc(const ParamsN& pn, int i, double x) {
    return -pn.theta[i](x) / (pn.lambda[i](x) + pn.mu(x));
}

} // namespace

KernelsN solve_exact_kernels(const ParamsN& pn, int m, const SolveOptions& opt) {
    if (m < 3) throw std::invalid_argument("solve_exact_kernels: need m >= 3");
    validate_params(pn, ValidationOptions{m, 1e-12});
    const int n = pn.n;
    KernelsN kn;
    kn.n = n;
    kn.tri = TriGrid(m);
    kn.k.assign(n + 1, std::vector<double>(kn.tri.node_count(), 0.0));
    const Grid1D& g = kn.tri.axis;
    const double h = g.h;
    Tabulated tab(pn, g);
    const double inv_n = 1.0 / n;

    // corner
    for (int i = 0; i < n; ++i) kn.at(i, 0, 0) = diag_bc(pn, i, 0.0);
    {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += tab.qlam0[j] * kn.at(j, 0, 0);
        kn.at(n, 0, 0) = s;
    }

    std::vector<double> srcs(static_cast<std::size_t>(n) * m);
    std::vector<double> srcv(m);

    for (int a = 0; a + 1 < m; ++a) {
        const double x_old = g.points[a];
        const double x_new = g.points[a + 1];
        const double mu_new = tab.muv[a + 1];
        const double mu_old = tab.muv[a];

        // sources from the previous row, all channels
        for (int b = 0; b <= a; ++b) {
            const double* sig_b = tab.sigT.data() + static_cast<std::size_t>(b) * n * n;
            double kv_v = kn.at(n, a, b);
            double wsum = 0.0;
            for (int i = 0; i < n; ++i) {
                double dot = 0.0;
                const double* row = sig_b + static_cast<std::size_t>(i) * n;
                for (int j = 0; j < n; ++j) dot += row[j] * kn.at(j, a, b);
                srcs[static_cast<std::size_t>(i) * m + b] =
                    tab.dlam[static_cast<std::size_t>(i) * m + b] * kn.at(i, a, b) + inv_n * dot +
                    tab.th[static_cast<std::size_t>(i) * m + b] * kv_v;
                wsum += tab.wv[static_cast<std::size_t>(i) * m + b] * kn.at(i, a, b);
            }
            srcv[b] = -tab.dmu[b] * kv_v + inv_n * wsum;
        }

        // rightward channels: characteristics enter from the diagonal
        parallel_for(
            n,
            [&](int i) {
                for (int b = 0; b <= a; ++b) {
                    double xi = g.points[b];
                    double ratio = tab.lam[static_cast<std::size_t>(i) * m + b] / mu_new;
                    double foot = xi + h * ratio;
                    double val, steplen;
                    if (foot <= x_old) {
                        val = kn.row_value(i, a, foot);
                        steplen = h;
                    } else {
                        double xstar = (xi + ratio * x_new) / (1.0 + ratio);
                        xstar = std::clamp(xstar, x_old, x_new);
                        val = diag_bc(pn, i, xstar);
                        steplen = x_new - xstar;
                    }
                    kn.at(i, a + 1, b) = val + steplen * srcs[static_cast<std::size_t>(i) * m + b] / mu_old;
                }
                kn.at(i, a + 1, a + 1) = diag_bc(pn, i, x_new);
            },
            opt.parallel);

        // leftward channel: characteristics enter from xi = 0
        for (int b = 1; b <= a + 1; ++b) {
            double xi = g.points[b];
            int bs = std::min(b, a);
            double ratio = tab.muv[b] / mu_new;
            double foot = xi - h * ratio;
            double val, steplen;
            if (foot >= 0.0) {
                val = kn.row_value(n, a, std::min(foot, x_old));
                steplen = h;
            } else {
                double xstar = std::clamp(x_new - xi / ratio, x_old, x_new);
                double frac = (xstar - x_old) / h;
                double s = 0.0;
                for (int j = 0; j < n; ++j)
                    s += tab.qlam0[j] * ((1.0 - frac) * kn.at(j, a, 0) + frac * kn.at(j, a + 1, 0));
                val = s;
                steplen = x_new - xstar;
            }
            kn.at(n, a + 1, b) = val + steplen * srcv[bs] / mu_old;
        }

        // xi = 0 coupling, resolved against the already-updated k^j(x,0)
        double coupled = 0.0;
        for (int j = 0; j < n; ++j) coupled += tab.qlam0[j] * kn.at(j, a + 1, 0);
        kn.at(n, a + 1, 0) = coupled;
        for (int it = 0;; ++it) {
            double check = 0.0;
            for (int j = 0; j < n; ++j) check += tab.qlam0[j] * kn.at(j, a + 1, 0);
            double defect = std::abs(kn.at(n, a + 1, 0) - check);
            if (defect <= opt.fp_tol * std::max(1.0, std::abs(check))) break;
            if (it >= opt.max_iter)
                throw std::runtime_error("solve_exact_kernels: xi=0 coupling did not converge, defect " +
                                         std::to_string(defect));
            kn.at(n, a + 1, 0) = check;
        }
    }
    return kn;
}

ResidualReport kernel_residual(const KernelsN& kn, const ParamsN& pn) {
    const int n = kn.n;
    const int m = kn.tri.m();
    const Grid1D& g = kn.tri.axis;
    const double h = g.h;
    Tabulated tab(pn, g);
    const double inv_n = 1.0 / n;
    ResidualReport rep;
    rep.kernel_scale = kn.max_abs();
    double sum_u = 0.0, sum_v = 0.0;
    for (int a = 1; a + 1 < m; ++a) {
        double mu_x = tab.muv[a];
        for (int b = 1; b + 1 <= a; ++b) {
            std::vector<double> kv(n + 1);
            for (int ch = 0; ch <= n; ++ch) kv[ch] = kn.at(ch, a, b);
            const double* sig_b = tab.sigT.data() + static_cast<std::size_t>(b) * n * n;
            for (int i = 0; i < n; ++i) {
                double dx = (kn.at(i, a + 1, b) - kn.at(i, a - 1, b)) / (2.0 * h);
                double dxi = (kn.at(i, a, b + 1) - kn.at(i, a, b - 1)) / (2.0 * h);
                double dot = 0.0;
                const double* row = sig_b + static_cast<std::size_t>(i) * n;
                for (int j = 0; j < n; ++j) dot += row[j] * kv[j];
                double rhs = tab.dlam[static_cast<std::size_t>(i) * m + b] * kv[i] + inv_n * dot +
                             tab.th[static_cast<std::size_t>(i) * m + b] * kv[n];
                double r = mu_x * dx - tab.lam[static_cast<std::size_t>(i) * m + b] * dxi - rhs;
                rep.max_interior_u = std::max(rep.max_interior_u, std::abs(r));
                sum_u += r * r;
            }
            double dx = (kn.at(n, a + 1, b) - kn.at(n, a - 1, b)) / (2.0 * h);
            double dxi = (kn.at(n, a, b + 1) - kn.at(n, a, b - 1)) / (2.0 * h);
            double wsum = 0.0;
            for (int j = 0; j < n; ++j) wsum += tab.wv[static_cast<std::size_t>(j) * m + b] * kv[j];
            double rhs = -tab.dmu[b] * kv[n] + inv_n * wsum;
            double r = mu_x * dx + tab.muv[b] * dxi - rhs;
            rep.max_interior_v = std::max(rep.max_interior_v, std::abs(r));
            sum_v += r * r;
        }
    }
    rep.l2_interior_u = std::sqrt(inv_n * sum_u * h * h);
    rep.l2_interior_v = std::sqrt(sum_v * h * h);
    double mu0 = pn.mu(0.0);
    for (int a = 0; a < m; ++a) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += tab.qlam0[j] * kn.at(j, a, 0);
        rep.max_bc_defect = std::max(rep.max_bc_defect, std::abs(mu0 * (kn.at(n, a, 0) - s)));
    }
    return rep;
}

} // namespace cbs
