#include "volspill/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace volspill {

std::vector<double> rolling_mean(std::span<const double> x, int window) {
    std::vector<double> out(x.size());
    if (window <= 1) {
        std::copy(x.begin(), x.end(), out.begin());
        return out;
    }
    double sum = 0.0;
    const auto w = static_cast<std::size_t>(window);
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += x[i];
        if (i >= w) sum -= x[i - w];
        out[i] = sum / static_cast<double>(std::min(i + 1, w));
    }
    return out;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string render_svg(const LinePlot& plot) {
    constexpr double width = 900, height = 420;
    constexpr double left = 70, right = 20, top = 40, bottom = 50;
    const double pw = width - left - right;
    const double ph = height - top - bottom;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
        << escape(plot.title) << "</text>\n";
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    if (plot.dates.empty()) {
        svg << "</svg>\n";
        return svg.str();
    }
    const Date d0 = plot.dates.front();
    const double span = std::max(1, plot.dates.back().days_since(d0));
    const double yr = plot.y_max > plot.y_min ? plot.y_max - plot.y_min : 1.0;
    auto px = [&](Date d) { return left + pw * d.days_since(d0) / span; };
    auto py = [&](double v) {
        const double c = std::clamp(std::isfinite(v) ? v : plot.y_min, plot.y_min, plot.y_max);
        return top + ph * (1.0 - (c - plot.y_min) / yr);
    };

    // y ticks
    for (int i = 0; i <= 4; ++i) {
        const double v = plot.y_min + yr * i / 4.0;
        svg << "<line x1=\"" << left - 5 << "\" y1=\"" << fmt(py(v)) << "\" x2=\"" << left << "\" y2=\"" << fmt(py(v))
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << fmt(py(v) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(v) << "</text>\n";
    }
    // x ticks at year starts
    for (int y = d0.year() + 1; y <= plot.dates.back().year(); ++y) {
        const Date d(y, 1, 1);
        svg << "<text x=\"" << fmt(px(d)) << "\" y=\"" << top + ph + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << y << "</text>\n";
    }
    svg << "<text x=\"16\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 16 " << top + ph / 2
        << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(plot.y_label)
        << "</text>\n";

    if (plot.boundary) {
        const double x = px(*plot.boundary);
        svg << "<line class=\"boundary\" x1=\"" << fmt(x) << "\" y1=\"" << top << "\" x2=\"" << fmt(x) << "\" y2=\""
            << top + ph << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
    }

    for (std::size_t s = 0; s < plot.series.size(); ++s) {
        const auto& series = plot.series[s];
        svg << "<polyline class=\"series\" fill=\"none\" stroke-width=\"1\" stroke=\"" << series.color
            << "\" points=\"";
        const std::size_t n = std::min(series.y.size(), plot.dates.size());
        for (std::size_t i = 0; i < n; ++i) {
            svg << (i ? " " : "") << fmt(px(plot.dates[i])) << ',' << fmt(py(series.y[i]));
        }
        svg << "\"/>\n";
        const double ly = top + 14 + 16 * static_cast<double>(s);
        svg << "<line x1=\"" << left + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + 30 << "\" y2=\"" << ly
            << "\" stroke=\"" << series.color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << left + 36 << "\" y=\"" << ly + 4 << "\" font-family=\"sans-serif\" font-size=\"12\">"
            << escape(series.label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace volspill
