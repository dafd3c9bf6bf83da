#pragma once

#include "volspill/date.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace volspill {

struct LineSeries {
    std::string label;
    std::string color;
    std::vector<double> y;
};

/// Dated line chart with a fixed y range. Values outside the range are clipped to the frame.
struct LinePlot {
    std::string title;
    std::string y_label;
    std::vector<Date> dates;
    std::vector<LineSeries> series;
    double y_min = 0.0;
    double y_max = 1.0;
    std::optional<Date> boundary;
};

std::string render_svg(const LinePlot& plot);

/// Trailing rolling mean; the first window-1 points average what is available.
std::vector<double> rolling_mean(std::span<const double> x, int window);

} // namespace volspill
