#include "cbs/continuum_kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cbs {

void ContinuumKernel::slice(double x, double xi, const double* ys, double* out, int count) const {
    if (k_slice) {
        k_slice(x, xi, ys, out, count);
        return;
    }
    for (int c = 0; c < count; ++c) out[c] = k(x, xi, ys[c]);
}

ContinuumKernel example_kernel() {
    const double kb = 35.0 / (2.0 * std::numbers::pi * std::numbers::pi);
    ContinuumKernel kc;
    kc.kbar = [kb](double, double) { return kb; };
    kc.k = [kb](double, double xi, double y) {
        double amp = 35.0 * std::exp(2.0 * xi * kb);
        return amp * y * (y - 1.0);
    };
    kc.k_slice = [kb](double, double xi, const double* ys, double* out, int count) {
        double amp = 35.0 * std::exp(2.0 * xi * kb);
        for (int c = 0; c < count; ++c) out[c] = amp * ys[c] * (ys[c] - 1.0);
    };
    kc.provenance.kind = "closed-form";
    return kc;
}

namespace {

int cell_of(double y, int ny) {
    int i = static_cast<int>(std::ceil(y * ny));
    if (i < 1) i = 1;
    if (i > ny) i = ny;
    return i - 1;
}

} // namespace

ContinuumKernel solve_continuum_kernels(const ContinuumParams& pc, int n_y, int m,
                                        const SolveOptions& opt) {
    if (n_y < 2) throw std::invalid_argument("solve_continuum_kernels: need n_y >= 2");
    auto kn = std::make_shared<const KernelsN>(solve_exact_kernels(sample_params(pc, n_y), m, opt));
    ContinuumKernel kc;
    kc.numeric = kn;
    kc.provenance.kind = "numeric";
    kc.provenance.n_y = n_y;
    kc.provenance.m = m;
    kc.k = [kn, n_y](double x, double xi, double y) { return kn->value(cell_of(y, n_y), x, xi); };
    kc.kbar = [kn, n_y](double x, double xi) { return kn->value(n_y, x, xi); };
    kc.k_slice = [kn, n_y](double x, double xi, const double* ys, double* out, int count) {
        TriStencil st(kn->tri, x, xi);
        for (int c = 0; c < count; ++c) out[c] = st.apply(kn->k[cell_of(ys[c], n_y)]);
    };
    return kc;
}

const KernelsN* numeric_tabulation(const ContinuumKernel& kc) { return kc.numeric.get(); }

ContinuumResidualReport continuum_residual(const ContinuumKernel& kc, const ContinuumParams& pc,
                                           int m, int n_y) {
    if (m < 3) throw std::invalid_argument("continuum_residual: need m >= 3");
    if (n_y < 2) throw std::invalid_argument("continuum_residual: need n_y >= 2");
    TriGrid tri(m);
    const Grid1D& g = tri.axis;
    Grid1D gy(n_y);
    const double h = g.h;
    const double hy = gy.h;

    // tabulate the kernel on triangle x y-grid and the fields on grid x y-grid
    std::vector<double> K(tri.node_count() * static_cast<std::size_t>(n_y));
    std::vector<double> Kb(tri.node_count());
    for (int a = 0; a < m; ++a)
        for (int b = 0; b <= a; ++b) {
            std::size_t id = tri.index(a, b);
            kc.slice(g.points[a], g.points[b], gy.points.data(), K.data() + id * n_y, n_y);
            Kb[id] = kc.kbar(g.points[a], g.points[b]);
        }
    std::vector<double> lam(static_cast<std::size_t>(m) * n_y), lamx(lam.size()), th(lam.size()),
        wv(lam.size());
    std::vector<double> muv(m), dmu(m), qv(n_y);
    for (int b = 0; b < m; ++b) {
        double x = g.points[b];
        muv[b] = pc.mu(x);
        dmu[b] = pc.mu.d(x);
        for (int l = 0; l < n_y; ++l) {
            double y = gy.points[l];
            lam[static_cast<std::size_t>(b) * n_y + l] = pc.lambda(x, y);
            lamx[static_cast<std::size_t>(b) * n_y + l] = pc.lambda.dx(x, y);
            th[static_cast<std::size_t>(b) * n_y + l] = pc.theta(x, y);
            wv[static_cast<std::size_t>(b) * n_y + l] = pc.w(x, y);
        }
    }
    for (int l = 0; l < n_y; ++l) qv[l] = pc.q(gy.points[l]);

    ContinuumResidualReport rep;
    for (double v : K) rep.kernel_scale = std::max(rep.kernel_scale, std::abs(v));
    for (double v : Kb) rep.kernel_scale = std::max(rep.kernel_scale, std::abs(v));

    double sum_k = 0.0, sum_kb = 0.0;
    std::vector<double> S(static_cast<std::size_t>(n_y) * n_y);  // S[l*ny + j] = sigma(xi, eta_j, y_l) * w_j
    std::vector<double> I(n_y);
    Fn3 sg = pc.sigma;
    for (int b = 1; b + 1 < m; ++b) {
        double xi = g.points[b];
        for (int l = 0; l < n_y; ++l)
            for (int j = 0; j < n_y; ++j) {
                double wj = (j == 0 || j == n_y - 1) ? 0.5 * hy : hy;
                S[static_cast<std::size_t>(l) * n_y + j] = sg.f(xi, gy.points[j], gy.points[l]) * wj;
            }
        for (int a = b + 1; a + 1 < m; ++a) {
            const double* kv = K.data() + tri.index(a, b) * n_y;
            const double* kxp = K.data() + tri.index(a + 1, b) * n_y;
            const double* kxm = K.data() + tri.index(a - 1, b) * n_y;
            const double* kep = K.data() + tri.index(a, b + 1) * n_y;
            const double* kem = K.data() + tri.index(a, b - 1) * n_y;
            double kb_here = Kb[tri.index(a, b)];
            for (int l = 0; l < n_y; ++l) {
                const double* srow = S.data() + static_cast<std::size_t>(l) * n_y;
                double integ = 0.0;
                for (int j = 0; j < n_y; ++j) integ += srow[j] * kv[j];
                I[l] = integ;
            }
            double mu_x = muv[a];
            const double* lamb = lam.data() + static_cast<std::size_t>(b) * n_y;
            const double* lamxb = lamx.data() + static_cast<std::size_t>(b) * n_y;
            const double* thb = th.data() + static_cast<std::size_t>(b) * n_y;
            for (int l = 0; l < n_y; ++l) {
                double dx = (kxp[l] - kxm[l]) / (2.0 * h);
                double dxi = (kep[l] - kem[l]) / (2.0 * h);
                double r = mu_x * dx - lamb[l] * dxi - thb[l] * kb_here - lamxb[l] * kv[l] - I[l];
                rep.max_interior_k = std::max(rep.max_interior_k, std::abs(r));
                sum_k += r * r;
            }
            // leftward kernel equation
            double dxb = (Kb[tri.index(a + 1, b)] - Kb[tri.index(a - 1, b)]) / (2.0 * h);
            double dxib = (Kb[tri.index(a, b + 1)] - Kb[tri.index(a, b - 1)]) / (2.0 * h);
            const double* wrow = wv.data() + static_cast<std::size_t>(b) * n_y;
            double winteg = 0.0;
            for (int l = 0; l < n_y; ++l) {
                double wl = (l == 0 || l == n_y - 1) ? 0.5 * hy : hy;
                winteg += wl * wrow[l] * kv[l];
            }
            double rb = mu_x * dxb + muv[b] * dxib + dmu[b] * kb_here - winteg;
            rep.max_interior_kbar = std::max(rep.max_interior_kbar, std::abs(rb));
            sum_kb += rb * rb;
        }
    }
    rep.l2_interior_k = std::sqrt(sum_k * h * h * hy);
    rep.l2_interior_kbar = std::sqrt(sum_kb * h * h);

    for (int a = 0; a < m; ++a) {
        double x = g.points[a];
        const double* kv = K.data() + tri.index(a, a) * n_y;
        for (int l = 0; l < n_y; ++l) {
            double y = gy.points[l];
            double d = kv[l] + pc.theta(x, y) / (pc.lambda(x, y) + pc.mu(x));
            rep.max_diag_defect = std::max(rep.max_diag_defect, std::abs(d));
        }
        const double* k0 = K.data() + tri.index(a, 0) * n_y;
        double integ = 0.0;
        for (int l = 0; l < n_y; ++l) {
            double wl = (l == 0 || l == n_y - 1) ? 0.5 * hy : hy;
            integ += wl * qv[l] * lam[l] * k0[l];
        }
        rep.max_bc_defect = std::max(rep.max_bc_defect, std::abs(muv[0] * Kb[tri.index(a, 0)] - integ));
    }
    return rep;
}

KernelsN sample_kernel(const ContinuumKernel& kc, int n, const TriGrid& tri) {
    if (n < 1) throw std::invalid_argument("sample_kernel: need n >= 1");
    KernelsN kn;
    kn.n = n;
    kn.tri = tri;
    kn.k.assign(n + 1, std::vector<double>(tri.node_count()));
    std::vector<double> ys(n);
    for (int i = 1; i <= n; ++i) ys[i - 1] = static_cast<double>(i) / n;
    std::vector<double> out(n);
    const int m = tri.m();
    for (int a = 0; a < m; ++a) {
        double x = tri.axis.points[a];
        for (int b = 0; b <= a; ++b) {
            double xi = tri.axis.points[b];
            std::size_t id = tri.index(a, b);
            kc.slice(x, xi, ys.data(), out.data(), n);
            for (int i = 0; i < n; ++i) kn.k[i][id] = out[i];
            kn.k[n][id] = kc.kbar(x, xi);
        }
    }
    return kn;
}

GainRow sample_gain_row(const ContinuumKernel& kc, int n, const Grid1D& g) {
    if (n < 1) throw std::invalid_argument("sample_gain_row: need n >= 1");
    GainRow row;
    row.n = n;
    row.axis = g;
    row.data.resize(static_cast<std::size_t>(g.m) * (n + 1));
    std::vector<double> ys(n);
    for (int i = 1; i <= n; ++i) ys[i - 1] = static_cast<double>(i) / n;
    for (int b = 0; b < g.m; ++b) {
        double xi = g.points[b];
        double* slot = row.data.data() + static_cast<std::size_t>(b) * (n + 1);
        kc.slice(1.0, xi, ys.data(), slot, n);
        slot[n] = kc.kbar(1.0, xi);
    }
    return row;
}

namespace {

/** Row-wise gap aggregation shared by both kernel_delta variants; fetch(ch,b)
 * returns the approximate gain at channel ch, node b of the x = 1 row. */
template <class Fetch>
DeltaReport delta_from_rows(const KernelsN& exact, const Fetch& fetch) {
    const int n = exact.n;
    const int m = exact.tri.m();
    const int a = m - 1;
    DeltaReport rep;
    rep.per_channel.assign(n + 1, 0.0);
    for (int b = 0; b < m; ++b) {
        double maxc = 0.0, sumsq = 0.0;
        for (int ch = 0; ch <= n; ++ch) {
            double d = std::abs(fetch(ch, b) - exact.at(ch, a, b));
            rep.per_channel[ch] = std::max(rep.per_channel[ch], d);
            if (ch < n) {
                sumsq += d * d;
                rep.max_inf_without_v = std::max(rep.max_inf_without_v, d);
            }
            maxc = std::max(maxc, d);
        }
        double dv = std::abs(fetch(n, b) - exact.at(n, a, b));
        rep.max_inf_with_v = std::max(rep.max_inf_with_v, maxc);
        rep.e_aggregate = std::max(rep.e_aggregate, std::sqrt(sumsq / n + dv * dv));
    }
    return rep;
}

} // namespace

DeltaReport kernel_delta(const KernelsN& exact, const KernelsN& approx) {
    if (exact.n != approx.n || exact.tri.m() != approx.tri.m())
        throw std::invalid_argument("kernel_delta: kernels have n=" + std::to_string(exact.n) + ",m=" +
                                    std::to_string(exact.tri.m()) + " vs n=" + std::to_string(approx.n) +
                                    ",m=" + std::to_string(approx.tri.m()));
    const int a = exact.tri.m() - 1;
    return delta_from_rows(exact, [&](int ch, int b) { return approx.at(ch, a, b); });
}

DeltaReport kernel_delta(const KernelsN& exact, const GainRow& approx) {
    if (exact.n != approx.n || exact.tri.m() != approx.axis.m)
        throw std::invalid_argument("kernel_delta: kernels have n=" + std::to_string(exact.n) + ",m=" +
                                    std::to_string(exact.tri.m()) + " but the gain row has n=" +
                                    std::to_string(approx.n) + ",m=" + std::to_string(approx.axis.m));
    return delta_from_rows(exact, [&](int ch, int b) { return approx.at(ch, b); });
}

} // namespace cbs
