#include "cbs/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cbs {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

} // namespace

void write_kernels_csv(const std::string& path, const KernelsN& kn) {
    auto out = open_out(path);
    out << "i,x,xi,k\n";
    const int m = kn.tri.m();
    for (int ch = 0; ch <= kn.n; ++ch)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b <= a; ++b)
                out << (ch + 1) << ',' << format_double(kn.tri.axis.points[a]) << ','
                    << format_double(kn.tri.axis.points[b]) << ',' << format_double(kn.at(ch, a, b))
                    << '\n';
}

void write_trajectory_csv(const std::string& path, const Trajectory& tr) {
    auto out = open_out(path);
    out << "t,U,E\n";
    for (std::size_t k = 0; k < tr.times.size(); ++k)
        out << format_double(tr.times[k]) << ',' << format_double(tr.controls[k]) << ','
            << format_double(tr.enorms[k]) << '\n';
}

void write_snapshots_csv(const std::string& path, const Trajectory& tr,
                         const std::vector<double>& at_times) {
    auto out = open_out(path);
    out << "t,i,x,value\n";
    Grid1D g(tr.meta.m);
    for (double want : at_times) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < tr.times.size(); ++k)
            if (std::abs(tr.times[k] - want) < std::abs(tr.times[best] - want)) best = k;
        const StateN& s = tr.states[best];
        std::string t = format_double(tr.times[best]);
        for (int i = 0; i < s.n; ++i)
            for (int j = 0; j < s.m; ++j)
                out << t << ',' << (i + 1) << ',' << format_double(g.points[j]) << ','
                    << format_double(s.u_at(i, j)) << '\n';
        for (int j = 0; j < s.m; ++j)
            out << t << ',' << (s.n + 1) << ',' << format_double(g.points[j]) << ','
                << format_double(s.v[j]) << '\n';
    }
}

void write_error_curve_csv(const std::string& path, const std::vector<double>& times,
                           const std::vector<double>& e) {
    if (times.size() != e.size())
        throw std::invalid_argument("write_error_curve_csv: times and e differ in length");
    auto out = open_out(path);
    out << "t,e\n";
    for (std::size_t k = 0; k < times.size(); ++k)
        out << format_double(times[k]) << ',' << format_double(e[k]) << '\n';
}

nlohmann::json to_json(const ResidualReport& r) {
    return {{"max_interior_u", r.max_interior_u}, {"l2_interior_u", r.l2_interior_u},
            {"max_interior_v", r.max_interior_v}, {"l2_interior_v", r.l2_interior_v},
            {"max_bc_defect", r.max_bc_defect},   {"kernel_scale", r.kernel_scale}};
}

nlohmann::json to_json(const ContinuumResidualReport& r) {
    return {{"max_interior_k", r.max_interior_k},
            {"l2_interior_k", r.l2_interior_k},
            {"max_interior_kbar", r.max_interior_kbar},
            {"l2_interior_kbar", r.l2_interior_kbar},
            {"max_diag_defect", r.max_diag_defect},
            {"max_bc_defect", r.max_bc_defect},
            {"kernel_scale", r.kernel_scale}};
}

nlohmann::json to_json(const DeltaReport& r) {
    return {{"per_channel", r.per_channel},
            {"max_inf_with_v", r.max_inf_with_v},
            {"max_inf_without_v", r.max_inf_without_v},
            {"e_aggregate", r.e_aggregate}};
}

nlohmann::json to_json(const ParamErrorReport& r) {
    return {{"lambda", r.lambda}, {"sigma", r.sigma}, {"theta", r.theta}, {"w", r.w}, {"q", r.q}};
}

nlohmann::json to_json(const ControlDistance& d) { return {{"sup", d.sup}, {"l2", d.l2}}; }

nlohmann::json to_json(const DecayFit& f) {
    return {{"M", f.M},
            {"c", f.c},
            {"t_start", f.t_start},
            {"t_end", f.t_end},
            {"rms_residual", f.rms_residual}};
}

nlohmann::json to_json(const ContinuumConstants& c) {
    nlohmann::json j{{"M_sigma", c.m_sigma}, {"M_W", c.m_w}, {"M_lambda", c.m_lambda}, {"M_k", c.m_k}};
    j["M_kappa"] = c.kappa_available ? nlohmann::json(0.0) : nlohmann::json("unavailable");
    j["M_c"] = c.c_available ? nlohmann::json(0.0) : nlohmann::json("unavailable");
    j["M_l"] = c.l_available ? nlohmann::json(0.0) : nlohmann::json("unavailable");
    return j;
}

nlohmann::json to_json(const Trajectory::Meta& m) {
    return {{"n", m.n},
            {"m", m.m},
            {"dt", m.dt},
            {"save_stride", m.save_stride},
            {"controller", m.controller},
            {"params_hash", m.params_hash},
            {"variant", m.variant},
            {"blown_up", m.blown_up},
            {"unstable", m.unstable}};
}

void write_json(const std::string& path, const nlohmann::json& j) {
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

} // namespace cbs
