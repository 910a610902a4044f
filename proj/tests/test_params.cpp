#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>

#include "cbs/params.hpp"

using namespace cbs;

namespace {

bool close14(double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a)); }

} // namespace

TEST_CASE("built-in example family, closed-form spot values") {
    ParamsN p1 = example_params_n(1);
    Grid1D g(33);
    for (double x : g.points) CHECK(p1.theta[0](x) == 0.0);
    CHECK(p1.q[0] == doctest::Approx(1.0).epsilon(1e-15));

    ParamsN p4 = example_params_n(4);
    CHECK(p4.q[1] == doctest::Approx(-1.0).epsilon(1e-15));  // cos(pi)
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(p4.sig(i, j)(0.0) == 0.0);
    for (int i = 1; i <= 4; ++i) {
        double expect = 2.0 * std::exp(1.0) * (i / 4.0 - 0.5);
        CHECK(p4.w[i - 1](1.0) == doctest::Approx(expect).epsilon(1e-14));
    }
    for (double x : g.points) {
        CHECK(p4.lambda[2](x) == 1.0);
        CHECK(p4.mu(x) == 1.0);
        CHECK(p4.theta[3](x) == 0.0);  // channel n: factor (i/n - 1) vanishes
    }
}

TEST_CASE("continuum example family") {
    ContinuumParams pc = example_params_continuum();
    Grid1D g(17);
    for (double x : g.points) {
        CHECK(pc.theta(x, 0.0) == 0.0);
        CHECK(pc.theta(x, 1.0) == 0.0);
        for (double y : g.points) CHECK(pc.lambda(x, y) == 1.0);
    }
    CHECK(pc.q(0.5) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("sampling the continuum family reproduces the n+1 family") {
    ContinuumParams pc = example_params_continuum();
    Grid1D g(21);
    for (int n : {1, 2, 3, 5, 8, 13, 21, 34, 40}) {
        ParamsN a = sample_params(pc, n);
        ParamsN b = example_params_n(n);
        for (int i = 0; i < n; ++i) {
            CHECK(close14(a.q[i], b.q[i]));
            for (double x : g.points) {
                CHECK(close14(a.lambda[i](x), b.lambda[i](x)));
                CHECK(close14(a.w[i](x), b.w[i](x)));
                CHECK(close14(a.theta[i](x), b.theta[i](x)));
                for (int j = 0; j < n; ++j) CHECK(close14(a.sig(i, j)(x), b.sig(i, j)(x)));
            }
        }
    }
}

TEST_CASE("sampling reports positivity violations with channel and location") {
    ContinuumParams pc = example_params_continuum();
    pc.lambda = Fn2([](double, double y) { return y - 0.5; });
    try {
        sample_params(pc, 2);
        FAIL("expected a positivity error");
    } catch (const std::runtime_error& e) {
        std::string msg = e.what();
        CHECK(msg.find("channel 1") != std::string::npos);
        CHECK(msg.find("x=") != std::string::npos);
    }
}

TEST_CASE("step-function lift of the coefficients") {
    ParamsN p1 = example_params_n(1);
    StepParams sp1 = lift_params(p1);
    for (double y : {0.0, 0.3, 0.7, 1.0}) {
        CHECK(sp1.lambda(0.5, y) == p1.lambda[0](0.5));
        CHECK(sp1.theta(0.25, y) == p1.theta[0](0.25));
    }

    ParamsN p5 = example_params_n(5);
    StepParams sp = lift_params(p5);
    for (int i = 1; i <= 5; ++i) {
        double y = static_cast<double>(i) / 5;  // right-closed: y = i/n hits cell i
        CHECK(sp.w(1.0, y) == p5.w[i - 1](1.0));
        CHECK(sp.q(y) == p5.q[i - 1]);
        for (int j = 1; j <= 5; ++j)
            CHECK(sp.sigma(0.8, y, static_cast<double>(j) / 5) == p5.sig(i - 1, j - 1)(0.8));
    }
}

TEST_CASE("lifted samples stay within a Lipschitz band of the continuum field") {
    ContinuumParams pc = example_params_continuum();
    int n = 16;
    StepParams sp = lift_params(sample_params(pc, n));
    // Lipschitz constant in y of theta at fixed x, measured on a fine grid
    for (double x : {0.0, 0.5, 1.0}) {
        double lip = 0.0;
        int fine = 4096;
        for (int k = 0; k < fine; ++k) {
            double y0 = static_cast<double>(k) / fine, y1 = static_cast<double>(k + 1) / fine;
            lip = std::max(lip, std::abs(pc.theta(x, y1) - pc.theta(x, y0)) * fine);
        }
        for (int i = 1; i <= n; ++i) {
            double mid = (i - 0.5) / n;
            CHECK(std::abs(sp.theta(x, mid) - pc.theta(x, mid)) <= lip / n + 1e-12);
        }
    }
}

TEST_CASE("interpolated continuum extension matches at the sample points") {
    ParamsN pn = example_params_n(5);
    for (double b : {0.0, 0.7, -2.0}) {
        ContinuumParams pc = interpolate_params(pn, b);
        for (int i = 1; i <= 5; ++i) {
            double y = static_cast<double>(i) / 5;
            for (double x : {0.0, 0.33, 1.0}) {
                CHECK(std::abs(pc.lambda(x, y) - pn.lambda[i - 1](x)) <= 1e-9);
                CHECK(std::abs(pc.w(x, y) - pn.w[i - 1](x)) <= 1e-9);
                CHECK(std::abs(pc.theta(x, y) - pn.theta[i - 1](x)) <= 1e-9);
                for (int j = 1; j <= 5; ++j)
                    CHECK(std::abs(pc.sigma(x, y, static_cast<double>(j) / 5) -
                                   pn.sig(i - 1, j - 1)(x)) <= 1e-9);
            }
            CHECK(std::abs(pc.q(y) - pn.q[i - 1]) <= 1e-9);
        }
    }
}

TEST_CASE("interpolation with n=1 and b=0 is the constant-in-y extension") {
    ParamsN pn = example_params_n(1);
    ContinuumParams pc = interpolate_params(pn, 0.0);
    for (double y : {0.0, 0.21, 0.77, 1.0}) {
        CHECK(pc.lambda(0.4, y) == doctest::Approx(pn.lambda[0](0.4)).epsilon(1e-15));
        CHECK(pc.theta(0.9, y) == doctest::Approx(pn.theta[0](0.9)).epsilon(1e-14));
    }
}

TEST_CASE("interpolation cap guards against basis blowup") {
    CHECK_THROWS(interpolate_params(example_params_n(13), 0.0));
}

TEST_CASE("param_error vanishes for constant-in-y fields") {
    ContinuumParams pc;
    pc.lambda = Fn2::constant(2.0);
    pc.mu = Fn1::constant(1.0);
    pc.sigma = Fn3([](double x, double, double) { return x; });
    pc.w = Fn2([](double x, double) { return std::sin(x); });
    pc.theta = Fn2::constant(-1.5);
    pc.q = Fn1::constant(0.25);
    StepParams sp = lift_params(sample_params(pc, 4));
    Grid1D g(17);
    ParamErrorReport rep = param_error(pc, sp, g);
    CHECK(rep.lambda <= 1e-14);
    CHECK(rep.sigma <= 1e-14);
    CHECK(rep.theta <= 1e-14);
    CHECK(rep.w <= 1e-14);
    CHECK(rep.q <= 1e-14);
}

TEST_CASE("param_error of the example family decreases when n doubles") {
    ContinuumParams pc = example_params_continuum();
    Grid1D g(17);
    ParamErrorReport e16 = param_error(pc, lift_params(sample_params(pc, 16)), g);
    ParamErrorReport e32 = param_error(pc, lift_params(sample_params(pc, 32)), g);
    CHECK(e32.sigma < e16.sigma);
    CHECK(e32.theta < e16.theta);
    CHECK(e32.w < e16.w);
    CHECK(e32.q < e16.q);
}

TEST_CASE("q-gap of the example decays at first order in n") {
    ContinuumParams pc = example_params_continuum();
    Grid1D g(3);
    std::vector<double> errs;
    for (int n : {8, 16, 32, 64})
        errs.push_back(param_error(pc, lift_params(sample_params(pc, n)), g, 32).q);
    // least-squares slope of log error vs log n
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < 4; ++k) {
        double lx = std::log2(8 << k), ly = std::log2(errs[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
    CHECK(-slope > 0.85);
    CHECK(-slope < 1.15);
}

TEST_CASE("json round trip preserves the coefficient fields") {
    ParamsN pn = example_params_n(3);
    std::string path = "params_roundtrip_test.json";
    save_params_json(path, pn, 65);
    ParamsN back = load_params_json(path);
    CHECK(back.n == 3);
    Grid1D g(29);
    for (int i = 0; i < 3; ++i) {
        CHECK(back.q[i] == pn.q[i]);
        for (double x : g.points) {
            CHECK(std::abs(back.w[i](x) - pn.w[i](x)) < 1e-3);
            CHECK(std::abs(back.theta[i](x) - pn.theta[i](x)) < 0.2);  // steep field, linear table
            for (int j = 0; j < 3; ++j) CHECK(std::abs(back.sig(i, j)(x) - pn.sig(i, j)(x)) < 1e-3);
        }
    }
    std::remove(path.c_str());
}

TEST_CASE("params hash is stable and input sensitive") {
    std::string h4 = params_hash(example_params_n(4));
    CHECK(h4 == params_hash(example_params_n(4)));
    CHECK(h4 != params_hash(example_params_n(5)));
}
