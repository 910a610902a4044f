#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cbs/ensemble.hpp"

using namespace cbs;

TEST_CASE("grid invariants") {
    Grid1D g(257);
    CHECK(g.points.front() == 0.0);
    CHECK(g.points.back() == 1.0);
    CHECK(std::abs(g.h * (g.m - 1) - 1.0) < 1e-12);
    for (int j = 1; j < g.m; ++j) CHECK(g.points[j] > g.points[j - 1]);
    CHECK_THROWS(Grid1D(1));
}

TEST_CASE("inner product of constant states is exact") {
    Grid1D g(3);
    StateN a(5, g.m);
    for (int j = 0; j < g.m; ++j) a.v[j] = 1.0;
    CHECK(inner_product_E(a, a, g) == doctest::Approx(1.0).epsilon(1e-15));

    StateN b(4, g.m);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < g.m; ++j) b.u_at(i, j) = 1.0;
    CHECK(inner_product_E(b, b, g) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("inner product of v(x)=x approximates 1/3") {
    Grid1D g(257);
    StateN a(2, g.m);
    for (int j = 0; j < g.m; ++j) a.v[j] = g.points[j];
    CHECK(std::abs(inner_product_E(a, a, g) - 1.0 / 3.0) < 1e-4);
}

TEST_CASE("inner product rejects mismatched shapes") {
    Grid1D g(9);
    StateN a(2, 9), b(3, 9), c(2, 5);
    CHECK_THROWS(inner_product_E(a, b, g));
    CHECK_THROWS(inner_product_E(a, c, g));
}

TEST_CASE("inner product is positive definite on tabulations") {
    Grid1D g(17);
    StateN z(3, g.m);
    CHECK(inner_product_E(z, z, g) == 0.0);
    z.u_at(1, 4) = 1e-8;
    CHECK(inner_product_E(z, z, g) > 0.0);
}

TEST_CASE("lift: indicator cells and norm identity") {
    StepFunction s = lift({1.0, 0.0});
    CHECK(s(0.25) == 1.0);
    CHECK(s(0.75) == 0.0);
    CHECK(s(0.5) == 1.0);   // right-closed cell
    CHECK(s(0.0) == 1.0);   // y = 0 pinned to cell 1
    CHECK(s(1.0) == 0.0);

    StepFunction c = lift({3.0, 3.0, 3.0});
    CHECK(c(0.1) == 3.0);
    CHECK(c(0.99) == 3.0);

    CHECK(std::sqrt(lift({3.0, 4.0}).l2_norm_sq()) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-15));

    CHECK_THROWS(lift({}));
}

TEST_CASE("lift is an isometry for random vectors") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + static_cast<int>(rng() % 17);
        std::vector<double> b(n);
        double sq = 0.0;
        for (double& x : b) {
            x = dist(rng);
            sq += x * x;
        }
        double lhs = lift(b).l2_norm_sq();
        double rhs = sq / n;
        CHECK(std::abs(lhs - rhs) <= 1e-14 * std::max(1.0, rhs));
    }
}

TEST_CASE("project: constants, left inverse, cell means of y") {
    auto c = project([](double) { return 2.5; }, 7);
    for (double v : c) CHECK(v == doctest::Approx(2.5).epsilon(1e-15));

    std::vector<double> b{1.5, -2.0, 0.25, 7.0};
    auto back = project(lift(b), 4);
    for (int i = 0; i < 4; ++i) CHECK(back[i] == b[i]);

    auto means = project([](double y) { return y; }, 2, 4097);
    CHECK(std::abs(means[0] - 0.25) < 1e-10);
    CHECK(std::abs(means[1] - 0.75) < 1e-10);
}

TEST_CASE("project of lifted multiple resolves exactly") {
    StepFunction fine = lift({1.0, 3.0, 5.0, 7.0, 9.0, 11.0});
    auto coarse = project(fine, 3);
    CHECK(coarse[0] == 2.0);
    CHECK(coarse[1] == 6.0);
    CHECK(coarse[2] == 10.0);
    CHECK_THROWS(project(fine, 4));
}

TEST_CASE("project converges to cell means at second order") {
    auto g = [](double y) { return std::exp(y) * std::sin(3.0 * y); };
    // reference cell means from a very fine rule
    auto ref = project(g, 4, 8193);
    auto err = [&](int q) {
        auto got = project(g, 4, q);
        double e = 0.0;
        for (int i = 0; i < 4; ++i) e = std::max(e, std::abs(got[i] - ref[i]));
        return e;
    };
    double e8 = err(8), e16 = err(16), e32 = err(32);
    double p1 = std::log2(e8 / e16), p2 = std::log2(e16 / e32);
    CHECK(p1 > 1.8);
    CHECK(p1 < 2.2);
    CHECK(p2 > 1.8);
    CHECK(p2 < 2.2);
}

TEST_CASE("trapezoid error decays at second order for smooth integrands") {
    auto integral = [](int m) {
        Grid1D g(m);
        std::vector<double> f(m);
        for (int j = 0; j < m; ++j) f[j] = std::sin(2.0 * g.points[j] + 0.3);
        return trapezoid(f, g.h);
    };
    double exact = (std::cos(0.3) - std::cos(2.3)) / 2.0;
    double e1 = std::abs(integral(33) - exact);
    double e2 = std::abs(integral(65) - exact);
    double e3 = std::abs(integral(129) - exact);
    double p1 = std::log2(e1 / e2), p2 = std::log2(e2 / e3);
    CHECK(p1 > 1.8);
    CHECK(p1 < 2.2);
    CHECK(p2 > 1.8);
    CHECK(p2 < 2.2);
}

TEST_CASE("continuum inner product") {
    Grid1D gx(3), gy(5);
    std::vector<double> u(gx.m * gy.m, 0.0), v(gx.m, 1.0);
    CHECK(inner_product_Ec(u, v, u, v, gx, gy) == doctest::Approx(1.0).epsilon(1e-15));

    std::fill(u.begin(), u.end(), 1.0);
    std::fill(v.begin(), v.end(), 0.0);
    CHECK(inner_product_Ec(u, v, u, v, gx, gy) == doctest::Approx(1.0).epsilon(1e-15));

    Grid1D gf(129);
    std::vector<double> uf(gf.m * gf.m), vf(gf.m, 0.0);
    for (int jx = 0; jx < gf.m; ++jx)
        for (int jy = 0; jy < gf.m; ++jy) uf[jx * gf.m + jy] = gf.points[jx] * gf.points[jy];
    CHECK(std::abs(inner_product_Ec(uf, vf, uf, vf, gf, gf) - 1.0 / 9.0) < 1e-4);

    CHECK_THROWS(inner_product_Ec(u, v, uf, vf, gx, gy));
}
