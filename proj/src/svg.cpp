#include "consist/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace consist {

namespace {

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, std::span<const SvgSeries> series) {
    constexpr double width = 800.0, height = 520.0;
    constexpr double left = 70.0, right = 770.0, top = 50.0, bottom = 460.0;

    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    if (!(x_min <= x_max)) {
        x_min = 0.0;
        x_max = 1.0;
        y_min = 0.0;
        y_max = 1.0;
    }
    if (x_min == x_max) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if (y_min == y_max) {
        y_min -= 0.5;
        y_max += 0.5;
    }
    const double y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * (right - left); };
    auto sy = [&](double y) { return bottom - (y - y_min) / (y_max - y_min) * (bottom - top); };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", width) +
           "\" height=\"" + fmt("%.0f", height) + "\" viewBox=\"0 0 " + fmt("%.0f", width) +
           " " + fmt("%.0f", height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"18\">" + title + "</text>\n";

    // Axes.
    out += "<line x1=\"" + fmt("%.1f", left) + "\" y1=\"" + fmt("%.1f", bottom) + "\" x2=\"" +
           fmt("%.1f", right) + "\" y2=\"" + fmt("%.1f", bottom) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out += "<line x1=\"" + fmt("%.1f", left) + "\" y1=\"" + fmt("%.1f", top) + "\" x2=\"" +
           fmt("%.1f", left) + "\" y2=\"" + fmt("%.1f", bottom) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    for (int t = 0; t <= 5; ++t) {
        const double fx = x_min + (x_max - x_min) * t / 5.0;
        const double fy = y_min + (y_max - y_min) * t / 5.0;
        out += "<line x1=\"" + fmt("%.1f", sx(fx)) + "\" y1=\"" + fmt("%.1f", bottom) +
               "\" x2=\"" + fmt("%.1f", sx(fx)) + "\" y2=\"" + fmt("%.1f", bottom + 5) +
               "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt("%.1f", sx(fx)) + "\" y=\"" + fmt("%.1f", bottom + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
               fmt("%.4g", fx) + "</text>\n";
        out += "<line x1=\"" + fmt("%.1f", left - 5) + "\" y1=\"" + fmt("%.1f", sy(fy)) +
               "\" x2=\"" + fmt("%.1f", left) + "\" y2=\"" + fmt("%.1f", sy(fy)) +
               "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt("%.1f", left - 8) + "\" y=\"" + fmt("%.1f", sy(fy) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
               fmt("%.4g", fy) + "</text>\n";
    }

    out += "<text x=\"420\" y=\"500\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\">" + x_label + "</text>\n";
    out += "<text x=\"20\" y=\"255\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\" transform=\"rotate(-90 20 255)\">" + y_label + "</text>\n";

    for (const auto& s : series) {
        out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : s.points) {
            out += fmt("%.2f", sx(x)) + "," + fmt("%.2f", sy(y)) + " ";
        }
        out += "\"/>\n";
        for (const auto& [x, y] : s.points) {
            out += "<circle cx=\"" + fmt("%.2f", sx(x)) + "\" cy=\"" + fmt("%.2f", sy(y)) +
                   "\" r=\"3\" fill=\"" + s.color + "\"/>\n";
        }
    }

    double legend_y = top + 10.0;
    for (const auto& s : series) {
        out += "<line x1=\"640\" y1=\"" + fmt("%.1f", legend_y) + "\" x2=\"670\" y2=\"" +
               fmt("%.1f", legend_y) + "\" stroke=\"" + s.color + "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"676\" y=\"" + fmt("%.1f", legend_y + 4) +
               "\" font-family=\"sans-serif\" font-size=\"13\">" + s.label + "</text>\n";
        legend_y += 20.0;
    }

    out += "</svg>\n";
    return out;
}

}  // namespace consist
