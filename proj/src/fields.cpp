#include "cbs/fields.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace cbs {

namespace {

constexpr double kDiffStep = 1e-6;

double central_difference(const std::function<double(double)>& f, double x) {
    double lo = std::max(0.0, x - kDiffStep);
    double hi = std::min(1.0, x + kDiffStep);
    return (f(hi) - f(lo)) / (hi - lo);
}

struct Table {
    std::vector<double> x, v;

    double eval(double xx) const {
        if (xx <= x.front()) return v.front();
        if (xx >= x.back()) return v.back();
        auto it = std::upper_bound(x.begin(), x.end(), xx);
        std::size_t j = static_cast<std::size_t>(it - x.begin());
        double t = (xx - x[j - 1]) / (x[j] - x[j - 1]);
        return (1.0 - t) * v[j - 1] + t * v[j];
    }

    double slope(double xx) const {
        if (xx <= x.front()) xx = x.front();
        if (xx >= x.back()) return (v.back() - v[v.size() - 2]) / (x.back() - x[x.size() - 2]);
        auto it = std::upper_bound(x.begin(), x.end(), xx);
        std::size_t j = static_cast<std::size_t>(it - x.begin());
        return (v[j] - v[j - 1]) / (x[j] - x[j - 1]);
    }
};

} // namespace

double Fn1::d(double x) const {
    if (df) return df(x);
    return central_difference(f, x);
}

Fn1 Fn1::constant(double c) {
    return Fn1([c](double) { return c; }, [](double) { return 0.0; });
}

Fn1 Fn1::tabulated(std::vector<double> x, std::vector<double> values) {
    if (x.size() != values.size() || x.size() < 2)
        throw std::invalid_argument("Fn1::tabulated: need matching x/values arrays with >= 2 entries");
    for (std::size_t j = 1; j < x.size(); ++j)
        if (!(x[j] > x[j - 1]))
            throw std::invalid_argument("Fn1::tabulated: x samples must be strictly increasing");
    auto tab = std::make_shared<Table>(Table{std::move(x), std::move(values)});
    return Fn1([tab](double xx) { return tab->eval(xx); },
               [tab](double xx) { return tab->slope(xx); });
}

double Fn2::dx(double x, double y) const {
    if (dfx) return dfx(x, y);
    double lo = std::max(0.0, x - kDiffStep);
    double hi = std::min(1.0, x + kDiffStep);
    return (f(hi, y) - f(lo, y)) / (hi - lo);
}

Fn2 Fn2::constant(double c) {
    return Fn2([c](double, double) { return c; }, [](double, double) { return 0.0; });
}

Fn3 Fn3::constant(double c) {
    return Fn3([c](double, double, double) { return c; });
}

} // namespace cbs
