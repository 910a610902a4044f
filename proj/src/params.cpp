#include "cbs/params.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace cbs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kThetaRate = 35.0 / (std::numbers::pi * std::numbers::pi);

double sigma_xpart(double x) { return x * x * x * (x + 1.0); }
double w_xpart(double x) { return x * (x + 1.0) * std::exp(x); }

} // namespace

int StepParams::cell(double y) const {
    int nn = src->n;
    int i = static_cast<int>(std::ceil(y * nn));
    if (i < 1) i = 1;
    if (i > nn) i = nn;
    return i - 1;
}

void validate_params(const ParamsN& pn, const ValidationOptions& opt) {
    if (pn.n < 1) throw std::invalid_argument("params: need n >= 1");
    if (pn.lambda.size() != static_cast<std::size_t>(pn.n) ||
        pn.w.size() != static_cast<std::size_t>(pn.n) ||
        pn.theta.size() != static_cast<std::size_t>(pn.n) ||
        pn.q.size() != static_cast<std::size_t>(pn.n) ||
        pn.sigma.size() != static_cast<std::size_t>(pn.n) * pn.n)
        throw std::invalid_argument("params: field array sizes do not match n=" + std::to_string(pn.n));
    Grid1D g(opt.check_m);
    for (double x : g.points) {
        double m = pn.mu(x);
        if (!(m >= opt.eps) || !std::isfinite(m))
            throw std::runtime_error("params: mu(" + std::to_string(x) + ") = " + std::to_string(m) +
                                     " violates positivity");
        for (int i = 0; i < pn.n; ++i) {
            double l = pn.lambda[i](x);
            if (!(l >= opt.eps) || !std::isfinite(l))
                throw std::runtime_error("params: lambda for channel " + std::to_string(i + 1) + " at x=" +
                                         std::to_string(x) + " is " + std::to_string(l) +
                                         ", violates positivity");
        }
    }
}

ParamsN sample_params(const ContinuumParams& pc, int n, const ValidationOptions& opt) {
    if (n < 1) throw std::invalid_argument("sample_params: need n >= 1");
    ParamsN pn;
    pn.n = n;
    pn.mu = pc.mu;
    pn.lambda.reserve(n);
    pn.w.reserve(n);
    pn.theta.reserve(n);
    pn.q.reserve(n);
    pn.sigma.reserve(static_cast<std::size_t>(n) * n);
    Fn2 lam = pc.lambda, w = pc.w, th = pc.theta;
    Fn3 sg = pc.sigma;
    for (int i = 1; i <= n; ++i) {
        double yi = static_cast<double>(i) / n;
        pn.lambda.emplace_back([lam, yi](double x) { return lam.f(x, yi); },
                               [lam, yi](double x) { return lam.dx(x, yi); });
        pn.w.emplace_back([w, yi](double x) { return w.f(x, yi); });
        pn.theta.emplace_back([th, yi](double x) { return th.f(x, yi); });
        pn.q.push_back(pc.q(yi));
    }
    for (int i = 1; i <= n; ++i) {
        double yi = static_cast<double>(i) / n;
        for (int j = 1; j <= n; ++j) {
            double yj = static_cast<double>(j) / n;
            pn.sigma.emplace_back([sg, yi, yj](double x) { return sg.f(x, yi, yj); });
        }
    }
    validate_params(pn, opt);
    return pn;
}

StepParams lift_params(const ParamsN& pn) {
    return StepParams{std::make_shared<ParamsN>(pn)};
}

StepParams lift_params(std::shared_ptr<const ParamsN> pn) {
    return StepParams{std::move(pn)};
}

ParamsN example_params_n(int n) {
    if (n < 1) throw std::invalid_argument("example_params_n: need n >= 1");
    ParamsN pn;
    pn.n = n;
    pn.mu = Fn1::constant(1.0);
    for (int i = 1; i <= n; ++i) {
        double yi = static_cast<double>(i) / n;
        pn.lambda.push_back(Fn1::constant(1.0));
        pn.w.emplace_back([yi](double x) { return w_xpart(x) * (yi - 0.5); });
        pn.theta.emplace_back([yi](double x) { return -70.0 * std::exp(kThetaRate * x) * (yi * (yi - 1.0)); });
        pn.q.push_back(std::cos(kTwoPi * yi));
    }
    for (int i = 1; i <= n; ++i) {
        double yi = static_cast<double>(i) / n;
        for (int j = 1; j <= n; ++j) {
            double yj = static_cast<double>(j) / n;
            pn.sigma.emplace_back([yi, yj](double x) { return sigma_xpart(x) * (yi - 0.5) * (yj - 0.5); });
        }
    }
    return pn;
}

ContinuumParams example_params_continuum() {
    ContinuumParams pc;
    pc.lambda = Fn2::constant(1.0);
    pc.mu = Fn1::constant(1.0);
    pc.sigma = Fn3([](double x, double y, double eta) { return sigma_xpart(x) * (y - 0.5) * (eta - 0.5); });
    pc.w = Fn2([](double x, double y) { return w_xpart(x) * (y - 0.5); });
    pc.theta = Fn2([](double x, double y) { return -70.0 * std::exp(kThetaRate * x) * (y * (y - 1.0)); });
    pc.q = Fn1([](double y) { return std::cos(kTwoPi * y); });
    return pc;
}

namespace {

/** Interpolation basis of the continuum extension: Lagrange factors on the
 * match points i/n plus an optional sine term that vanishes at all of them. */
double basis_p(int i, int n, double b, double y) {
    double p = 1.0;
    for (int k = 1; k <= n; ++k) {
        if (k == i) continue;
        p *= (static_cast<double>(k) / n - y) / (static_cast<double>(k - i) / n);
    }
    return p + b * std::sin(n * std::numbers::pi * y);
}

} // namespace

ContinuumParams interpolate_params(const ParamsN& pn, double b) {
    if (pn.n < 1) throw std::invalid_argument("interpolate_params: need n >= 1");
    if (pn.n > 12)
        throw std::invalid_argument("interpolate_params: n=" + std::to_string(pn.n) +
                                    " exceeds the basis cap of 12; supply continuum fields directly");
    auto src = std::make_shared<ParamsN>(pn);
    int n = pn.n;
    ContinuumParams pc;
    pc.mu = pn.mu;
    pc.lambda = Fn2(
        [src, n, b](double x, double y) {
            double s = 0.0;
            for (int i = 1; i <= n; ++i) s += src->lambda[i - 1](x) * basis_p(i, n, b, y);
            return s;
        },
        [src, n, b](double x, double y) {
            double s = 0.0;
            for (int i = 1; i <= n; ++i) s += src->lambda[i - 1].d(x) * basis_p(i, n, b, y);
            return s;
        });
    pc.w = Fn2([src, n, b](double x, double y) {
        double s = 0.0;
        for (int i = 1; i <= n; ++i) s += src->w[i - 1](x) * basis_p(i, n, b, y);
        return s;
    });
    pc.theta = Fn2([src, n, b](double x, double y) {
        double s = 0.0;
        for (int i = 1; i <= n; ++i) s += src->theta[i - 1](x) * basis_p(i, n, b, y);
        return s;
    });
    pc.sigma = Fn3([src, n, b](double x, double y, double eta) {
        double s = 0.0;
        for (int i = 1; i <= n; ++i) {
            double pi_y = basis_p(i, n, b, y);
            if (pi_y == 0.0) continue;
            double row = 0.0;
            for (int j = 1; j <= n; ++j) row += src->sig(i - 1, j - 1)(x) * basis_p(j, n, b, eta);
            s += pi_y * row;
        }
        return s;
    });
    pc.q = Fn1([src, n, b](double y) {
        double s = 0.0;
        for (int i = 1; i <= n; ++i) s += src->q[i - 1] * basis_p(i, n, b, y);
        return s;
    });
    return pc;
}

namespace {

/** Trapezoid of (f - c)^2 over one y-cell with q sub-points. */
double cell_sq_error(const std::function<double(double)>& f, double c, double y0, double y1, int q) {
    double sub_h = (y1 - y0) / (q - 1);
    double s = 0.0;
    for (int k = 0; k < q; ++k) {
        double d = f(y0 + k * sub_h) - c;
        double wgt = (k == 0 || k == q - 1) ? 0.5 : 1.0;
        s += wgt * d * d;
    }
    return s * sub_h;
}

} // namespace

ParamErrorReport param_error(const ContinuumParams& pc, const StepParams& sp, const Grid1D& g, int q_sub) {
    if (q_sub < 2) throw std::invalid_argument("param_error: need q_sub >= 2");
    int n = sp.n();
    double cell_h = 1.0 / n;
    ParamErrorReport rep;
    Fn2 lam = pc.lambda, w = pc.w, th = pc.theta;
    Fn3 sg = pc.sigma;
    for (double x : g.points) {
        double el = 0.0, ew = 0.0, et = 0.0, es = 0.0;
        for (int i = 0; i < n; ++i) {
            double y0 = i * cell_h, y1 = (i + 1) * cell_h;
            el += cell_sq_error([&](double y) { return lam.f(x, y); }, sp.src->lambda[i](x), y0, y1, q_sub);
            ew += cell_sq_error([&](double y) { return w.f(x, y); }, sp.src->w[i](x), y0, y1, q_sub);
            et += cell_sq_error([&](double y) { return th.f(x, y); }, sp.src->theta[i](x), y0, y1, q_sub);
        }
        double sub_h = cell_h / (q_sub - 1);
        for (int i = 0; i < n; ++i) {
            double ya = i * cell_h;
            for (int j = 0; j < n; ++j) {
                double ea = j * cell_h;
                double c = sp.src->sig(i, j)(x);
                double acc = 0.0;
                for (int ky = 0; ky < q_sub; ++ky) {
                    double y = ya + ky * sub_h;
                    double wy = (ky == 0 || ky == q_sub - 1) ? 0.5 : 1.0;
                    double inner = 0.0;
                    for (int ke = 0; ke < q_sub; ++ke) {
                        double eta = ea + ke * sub_h;
                        double we = (ke == 0 || ke == q_sub - 1) ? 0.5 : 1.0;
                        double d = sg.f(x, y, eta) - c;
                        inner += we * d * d;
                    }
                    acc += wy * inner * sub_h;
                }
                es += acc * sub_h;
            }
        }
        rep.lambda = std::max(rep.lambda, std::sqrt(el));
        rep.w = std::max(rep.w, std::sqrt(ew));
        rep.theta = std::max(rep.theta, std::sqrt(et));
        rep.sigma = std::max(rep.sigma, std::sqrt(es));
    }
    double eq = 0.0;
    for (int i = 0; i < n; ++i)
        eq += cell_sq_error([&](double y) { return pc.q(y); }, sp.src->q[i], i * cell_h, (i + 1) * cell_h,
                            q_sub);
    rep.q = std::sqrt(eq);
    return rep;
}

namespace {

using nlohmann::json;

Fn1 field_from_json(const json& j) {
    if (j.is_number()) return Fn1::constant(j.get<double>());
    if (!j.is_object() || !j.contains("x") || !j.contains("values"))
        throw std::runtime_error("params json: field must be a number or {\"x\": [...], \"values\": [...]}");
    return Fn1::tabulated(j["x"].get<std::vector<double>>(), j["values"].get<std::vector<double>>());
}

json field_to_json(const Fn1& f, int samples) {
    Grid1D g(samples);
    json j;
    j["x"] = g.points;
    std::vector<double> v(g.m);
    for (int k = 0; k < g.m; ++k) v[k] = f(g.points[k]);
    j["values"] = v;
    return j;
}

} // namespace

ParamsN load_params_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open parameter file: " + path);
    json j = json::parse(in);
    ParamsN pn;
    pn.n = j.at("n").get<int>();
    if (pn.n < 1) throw std::runtime_error("params json: need n >= 1");
    pn.mu = field_from_json(j.at("mu"));
    for (const auto& e : j.at("lambda")) pn.lambda.push_back(field_from_json(e));
    for (const auto& row : j.at("sigma"))
        for (const auto& e : row) pn.sigma.push_back(field_from_json(e));
    for (const auto& e : j.at("w")) pn.w.push_back(field_from_json(e));
    for (const auto& e : j.at("theta")) pn.theta.push_back(field_from_json(e));
    pn.q = j.at("q").get<std::vector<double>>();
    validate_params(pn);
    return pn;
}

void save_params_json(const std::string& path, const ParamsN& pn, int samples) {
    json j;
    j["n"] = pn.n;
    j["mu"] = field_to_json(pn.mu, samples);
    json lam = json::array(), sig = json::array(), w = json::array(), th = json::array();
    for (int i = 0; i < pn.n; ++i) {
        lam.push_back(field_to_json(pn.lambda[i], samples));
        w.push_back(field_to_json(pn.w[i], samples));
        th.push_back(field_to_json(pn.theta[i], samples));
        json row = json::array();
        for (int k = 0; k < pn.n; ++k) row.push_back(field_to_json(pn.sig(i, k), samples));
        sig.push_back(row);
    }
    j["lambda"] = lam;
    j["sigma"] = sig;
    j["w"] = w;
    j["theta"] = th;
    j["q"] = pn.q;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write parameter file: " + path);
    out << j.dump(2) << "\n";
}

ParamsN params_from_source(const std::string& source, int n) {
    if (source == "allkrs-example") {
        if (n < 1) throw std::invalid_argument("built-in example parameters need --n >= 1");
        return example_params_n(n);
    }
    ParamsN pn = load_params_json(source);
    if (n > 0 && n != pn.n)
        throw std::invalid_argument("parameter file has n=" + std::to_string(pn.n) +
                                    " but --n " + std::to_string(n) + " was requested");
    return pn;
}

std::string params_hash(const ParamsN& pn) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        for (int k = 0; k < 8; ++k) {
            h ^= (bits >> (8 * k)) & 0xffu;
            h *= 0x100000001b3ull;
        }
    };
    mix(static_cast<double>(pn.n));
    Grid1D probe(17);
    for (double x : probe.points) {
        mix(pn.mu(x));
        for (int i = 0; i < pn.n; ++i) {
            mix(pn.lambda[i](x));
            mix(pn.w[i](x));
            mix(pn.theta[i](x));
        }
    }
    Grid1D probe_s(5);
    for (double x : probe_s.points)
        for (int i = 0; i < pn.n; ++i)
            for (int j = 0; j < pn.n; ++j) mix(pn.sig(i, j)(x));
    for (double qi : pn.q) mix(qi);
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace cbs
