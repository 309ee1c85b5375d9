#include "frns/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace frns {

namespace {

std::string esc(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string num(double v, const char* f = "%.4g")
{
    char buf[32];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

} // namespace

std::string SvgPlot::render(int width, int height) const
{
    const double left = 70, right = 20, top = 40, bottom = 50;
    const double pw = width - left - right;
    const double ph = height - top - bottom;

    auto ty = [this](double y) { return log_y ? std::log10(y) : y; };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (log_y && !(s.y[i] > 0.0))
                continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    if (!std::isfinite(x0)) {
        x0 = 0; x1 = 1; y0 = 0; y1 = 1;
    }
    if (x1 == x0) { x0 -= 0.5; x1 += 0.5; }
    if (y1 == y0) { y0 -= 0.5; y1 += 0.5; }
    if (log_y) {
        y0 = std::floor(y0);
        y1 = std::ceil(y1);
    }
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
      << esc(title) << "</text>\n"
      << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">"
      << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph << "\"/>"
      << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph << "\"/></g>\n";

    o << "<g font-family=\"sans-serif\" font-size=\"10\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4.0;
        o << "<text x=\"" << num(px(xv), "%.1f") << "\" y=\"" << top + ph + 15 << "\" text-anchor=\"middle\">"
          << num(xv) << "</text>\n";
    }
    const int yt = log_y ? static_cast<int>(std::min(8.0, y1 - y0)) : 4;
    for (int i = 0; i <= yt; ++i) {
        const double yv = y0 + (y1 - y0) * i / std::max(yt, 1);
        const std::string label = log_y ? "1e" + num(std::round(yv), "%.0f") : num(yv);
        o << "<text x=\"" << left - 6 << "\" y=\"" << num(py(yv) + 3, "%.1f") << "\" text-anchor=\"end\">" << label
          << "</text>\n";
    }
    o << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">" << esc(x_label)
      << "</text>\n"
      << "<text x=\"15\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
      << top + ph / 2 << ")\">" << esc(y_label) << "</text>\n</g>\n";

    for (const auto& s : series) {
        std::ostringstream pts;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (log_y && !(s.y[i] > 0.0))
                continue;
            pts << num(px(s.x[i]), "%.2f") << "," << num(py(ty(s.y[i])), "%.2f") << " ";
        }
        o << "<polyline fill=\"none\" stroke=\"" << esc(s.colour) << "\" stroke-width=\"1.5\" points=\"" << pts.str()
          << "\"/>\n";
        if (s.markers)
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
                if (log_y && !(s.y[i] > 0.0))
                    continue;
                o << "<circle cx=\"" << num(px(s.x[i]), "%.2f") << "\" cy=\"" << num(py(ty(s.y[i])), "%.2f")
                  << "\" r=\"3\" fill=\"" << esc(s.colour) << "\"/>\n";
            }
    }
    o << "</svg>\n";
    return o.str();
}

void SvgPlot::write(const std::string& path) const
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + path);
    f << render();
}

} // namespace frns
