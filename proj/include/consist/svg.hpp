#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace consist {

// Minimal metric-curve rendering: polylines, axes, legend. Output is
// deterministic (fixed formatting, no timestamps).
struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;  // (x, y)
};

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, std::span<const SvgSeries> series);

}  // namespace consist
