#ifndef CBS_SVG_HPP
#define CBS_SVG_HPP

#include <string>
#include <vector>

namespace cbs {

/** Minimal SVG line-plot writer: axes, ticks, legend, polylines. */
class LinePlot {
public:
    LinePlot(std::string title, std::string xlabel, std::string ylabel)
        : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

    void add_series(std::string name, std::vector<double> xs, std::vector<double> ys);
    void write(const std::string& path) const;

private:
    struct Series {
        std::string name;
        std::vector<double> xs, ys;
    };
    std::string title_, xlabel_, ylabel_;
    std::vector<Series> series_;
};

} // namespace cbs

#endif
