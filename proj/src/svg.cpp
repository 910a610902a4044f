#include "cbs/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace cbs {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

void LinePlot::add_series(std::string name, std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("LinePlot: xs and ys differ in length");
    series_.push_back(Series{std::move(name), std::move(xs), std::move(ys)});
}

void LinePlot::write(const std::string& path) const {
    const double W = 720, H = 480;
    const double L = 70, R = 20, T = 36, B = 52;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series_)
        for (std::size_t k = 0; k < s.xs.size(); ++k) {
            if (!std::isfinite(s.xs[k]) || !std::isfinite(s.ys[k])) continue;
            xmin = std::min(xmin, s.xs[k]);
            xmax = std::max(xmax, s.xs[k]);
            ymin = std::min(ymin, s.ys[k]);
            ymax = std::max(ymax, s.ys[k]);
        }
    if (!std::isfinite(xmin)) { xmin = 0; xmax = 1; ymin = 0; ymax = 1; }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) { ymax = ymin + 0.5; ymin -= 0.5; }
    double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;
    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\" "
        << "font-family=\"sans-serif\">" << title_ << "</text>\n";

    // axes and ticks
    out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    const int ticks = 6;
    for (int k = 0; k <= ticks; ++k) {
        double x = xmin + (xmax - xmin) * k / ticks;
        double y = ymin + (ymax - ymin) * k / ticks;
        out << "<line x1=\"" << px(x) << "\" y1=\"" << H - B << "\" x2=\"" << px(x) << "\" y2=\""
            << H - B + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px(x) << "\" y=\"" << H - B + 18
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << num(x)
            << "</text>\n";
        out << "<line x1=\"" << L - 5 << "\" y1=\"" << py(y) << "\" x2=\"" << L << "\" y2=\"" << py(y)
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << L - 8 << "\" y=\"" << py(y) + 4
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << num(y)
            << "</text>\n";
    }
    out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 14
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << xlabel_
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << (T + H - B) / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" transform=\"rotate(-90 "
        << 16 << " " << (T + H - B) / 2 << ")\">" << ylabel_ << "</text>\n";

    for (std::size_t si = 0; si < series_.size(); ++si) {
        const auto& s = series_[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < s.xs.size(); ++k) {
            if (!std::isfinite(s.xs[k]) || !std::isfinite(s.ys[k])) continue;
            out << num(px(s.xs[k])) << ',' << num(py(s.ys[k])) << ' ';
        }
        out << "\"/>\n";
        double ly = T + 16 + 16 * static_cast<double>(si);
        out << "<line x1=\"" << W - R - 150 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - R - 126
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << W - R - 120 << "\" y=\"" << ly
            << "\" font-size=\"11\" font-family=\"sans-serif\">" << s.name << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace cbs
