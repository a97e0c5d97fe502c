#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "qafm/io.hpp"
#include "qafm/sweep.hpp"

namespace qafm::svg {

inline constexpr const char* kMaskColor = "#ffffff";

namespace detail {

// Linear ramp from dark blue to yellow.
inline std::string ramp(double f) {
    f = std::clamp(f, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(20 + f * (250 - 20)));
    const int g = static_cast<int>(std::lround(30 + f * (220 - 30)));
    const int b = static_cast<int>(std::lround(120 + f * (40 - 120)));
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace detail

/// Self-contained heatmap; masked cells are drawn in kMaskColor.
inline std::string heatmap(const MapResult& map, const std::string& title) {
    const std::size_t nx = map.grid.x.count, ny = map.grid.y.count;
    const double cell = std::max(2.0, std::min(12.0, 600.0 / static_cast<double>(std::max(nx, ny))));
    const double left = 70, top = 40;
    const double w = cell * static_cast<double>(nx), h = cell * static_cast<double>(ny);

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        if (!map.mask[i]) continue;
        lo = std::min(lo, map.values[i]);
        hi = std::max(hi, map.values[i]);
    }
    const double span = hi > lo ? hi - lo : 1.0;

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::num(left + w + 120) + "\" height=\"" +
         detail::num(top + h + 60) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"#f4f4f4\"/>\n";
    s += "<text x=\"" + detail::num(left) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" +
         detail::escape(title) + "</text>\n";
    for (std::size_t iy = 0; iy < ny; ++iy) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const std::size_t i = map.index(ix, iy);
            const std::string fill = map.mask[i] ? detail::ramp((map.values[i] - lo) / span) : kMaskColor;
            // y grows upward in the plot.
            const double px = left + cell * static_cast<double>(ix);
            const double py = top + cell * static_cast<double>(ny - 1 - iy);
            s += "<rect x=\"" + detail::num(px) + "\" y=\"" + detail::num(py) + "\" width=\"" + detail::num(cell) +
                 "\" height=\"" + detail::num(cell) + "\" fill=\"" + fill + "\"/>\n";
        }
    }
    const double ty = top + h + 20;
    s += "<text x=\"" + detail::num(left) + "\" y=\"" + detail::num(ty) +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + detail::escape(map.grid.x.name) + " [" +
         detail::num(map.grid.x.min) + ", " + detail::num(map.grid.x.max) + "]</text>\n";
    s += "<text x=\"4\" y=\"" + detail::num(top + h / 2) + "\" font-family=\"sans-serif\" font-size=\"11\">" +
         detail::escape(map.grid.y.name) + "</text>\n";
    // Color bar.
    const double bx = left + w + 30;
    for (int k = 0; k < 50; ++k) {
        const double f = static_cast<double>(k) / 49.0;
        s += "<rect x=\"" + detail::num(bx) + "\" y=\"" + detail::num(top + h * (1.0 - f) - h / 50.0) +
             "\" width=\"16\" height=\"" + detail::num(h / 50.0 + 0.5) + "\" fill=\"" + detail::ramp(f) + "\"/>\n";
    }
    s += "<text x=\"" + detail::num(bx + 20) + "\" y=\"" + detail::num(top + 10) +
         "\" font-family=\"sans-serif\" font-size=\"10\">" + detail::num(hi) + "</text>\n";
    s += "<text x=\"" + detail::num(bx + 20) + "\" y=\"" + detail::num(top + h) +
         "\" font-family=\"sans-serif\" font-size=\"10\">" + detail::num(lo) + "</text>\n";
    s += "</svg>\n";
    return s;
}

struct Curve {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
};

/// Curves on log-log axes (quadrature spreads span decades).
inline std::string curves(const std::vector<Curve>& cs, const std::string& title, const std::string& xlabel,
                          const std::string& ylabel) {
    const double left = 70, top = 40, w = 480, h = 480;
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
    for (const auto& c : cs) {
        for (double v : c.x) if (v > 0) { xlo = std::min(xlo, std::log10(v)); xhi = std::max(xhi, std::log10(v)); }
        for (double v : c.y) if (v > 0) { ylo = std::min(ylo, std::log10(v)); yhi = std::max(yhi, std::log10(v)); }
    }
    if (!(xhi > xlo)) { xlo -= 0.5; xhi += 0.5; }
    if (!(yhi > ylo)) { ylo -= 0.5; yhi += 0.5; }

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::num(left + w + 160) + "\" height=\"" +
         detail::num(top + h + 60) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    s += "<text x=\"" + detail::num(left) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" +
         detail::escape(title) + "</text>\n";
    s += "<rect x=\"" + detail::num(left) + "\" y=\"" + detail::num(top) + "\" width=\"" + detail::num(w) +
         "\" height=\"" + detail::num(h) + "\" fill=\"none\" stroke=\"#333\"/>\n";
    int row = 0;
    for (const auto& c : cs) {
        s += "<polyline fill=\"none\" stroke=\"" + c.color + "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < std::min(c.x.size(), c.y.size()); ++i) {
            if (!(c.x[i] > 0 && c.y[i] > 0)) continue;
            const double px = left + w * (std::log10(c.x[i]) - xlo) / (xhi - xlo);
            const double py = top + h * (1.0 - (std::log10(c.y[i]) - ylo) / (yhi - ylo));
            s += detail::num(px) + "," + detail::num(py) + " ";
        }
        s += "\"/>\n";
        s += "<text x=\"" + detail::num(left + w + 10) + "\" y=\"" + detail::num(top + 14 + 16 * row++) +
             "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + c.color + "\">" + detail::escape(c.label) +
             "</text>\n";
    }
    s += "<text x=\"" + detail::num(left) + "\" y=\"" + detail::num(top + h + 20) +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + detail::escape(xlabel) + " (log, " +
         detail::num(std::pow(10, xlo)) + " to " + detail::num(std::pow(10, xhi)) + ")</text>\n";
    s += "<text x=\"4\" y=\"" + detail::num(top + h / 2) + "\" font-family=\"sans-serif\" font-size=\"11\">" +
         detail::escape(ylabel) + "</text>\n";
    s += "</svg>\n";
    return s;
}

} // namespace qafm::svg
