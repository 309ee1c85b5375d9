#pragma once

#include <string>
#include <vector>

namespace frns {

struct SvgSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string colour = "#1f77b4";
    bool markers = false;
};

struct SvgPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::vector<SvgSeries> series;

    // SVG 1.1 document with axes, tick labels and one polyline per series.
    std::string render(int width = 640, int height = 420) const;
    void write(const std::string& path) const;
};

} // namespace frns
