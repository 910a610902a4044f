#ifndef CBS_FIELDS_HPP
#define CBS_FIELDS_HPP

#include <functional>
#include <utility>
#include <vector>

namespace cbs {

/** Scalar coefficient field on [0,1], evaluable anywhere, with an optional
 * analytic derivative. Without one, d() falls back to a central difference
 * (one-sided at the interval ends). */
struct Fn1 {
    std::function<double(double)> f;
    std::function<double(double)> df;

    Fn1() = default;
    Fn1(std::function<double(double)> fun) : f(std::move(fun)) {}
    Fn1(std::function<double(double)> fun, std::function<double(double)> dfun)
        : f(std::move(fun)), df(std::move(dfun)) {}

    double operator()(double x) const { return f(x); }
    double d(double x) const;

    static Fn1 constant(double c);
    /** Piecewise-linear interpolant of (x, values); clamps outside the table. */
    static Fn1 tabulated(std::vector<double> x, std::vector<double> values);
};

/** Field of two variables (x, y) with an optional analytic d/dx. */
struct Fn2 {
    std::function<double(double, double)> f;
    std::function<double(double, double)> dfx;

    Fn2() = default;
    Fn2(std::function<double(double, double)> fun) : f(std::move(fun)) {}
    Fn2(std::function<double(double, double)> fun, std::function<double(double, double)> dfun)
        : f(std::move(fun)), dfx(std::move(dfun)) {}

    double operator()(double x, double y) const { return f(x, y); }
    double dx(double x, double y) const;

    static Fn2 constant(double c);
};

/** Field of three variables (x, y, eta). */
struct Fn3 {
    std::function<double(double, double, double)> f;

    Fn3() = default;
    Fn3(std::function<double(double, double, double)> fun) : f(std::move(fun)) {}

    double operator()(double x, double y, double eta) const { return f(x, y, eta); }

    static Fn3 constant(double c);
};

} // namespace cbs

#endif
