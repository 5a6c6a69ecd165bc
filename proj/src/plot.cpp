#include "fragnet/plot.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fragnet/csv.hpp"

namespace fragnet {

namespace {

constexpr double width = 720.0, height = 440.0;
constexpr double margin_left = 60.0, margin_right = 20.0;
constexpr double margin_top = 20.0, margin_bottom = 50.0;

const char* palette[] = {"#1f6fb4", "#d1495b", "#2e8540", "#8a5fb0", "#b07d2b", "#4a4a4a"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

std::string render_svg(const std::vector<std::pair<std::string, MetricSeries>>& series) {
    if (series.empty())
        throw std::invalid_argument("render_svg: nothing to plot");
    int t_max = 1;
    for (const auto& [label, s] : series) {
        (void)label;
        for (const auto& row : s.rows)
            t_max = std::max(t_max, row.t);
    }

    const double plot_w = width - margin_left - margin_right;
    const double plot_h = height - margin_top - margin_bottom;
    const auto sx = [&](double t) { return margin_left + plot_w * t / t_max; };
    const auto sy = [&](double x) { return margin_top + plot_h * (1.0 - x); };

    std::string svg =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
        num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n" +
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // frame and gridlines at x = 0, 0.25, ..., 1
    for (int i = 0; i <= 4; ++i) {
        const double x_val = 0.25 * i;
        const double y = sy(x_val);
        svg += "<line x1=\"" + num(margin_left) + "\" y1=\"" + num(y) + "\" x2=\"" +
               num(width - margin_right) + "\" y2=\"" + num(y) +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + num(margin_left - 8.0) + "\" y=\"" + num(y + 4.0) +
               "\" font-size=\"12\" text-anchor=\"end\" fill=\"#333333\">" + num(x_val) +
               "</text>\n";
    }
    svg += "<line x1=\"" + num(margin_left) + "\" y1=\"" + num(margin_top) + "\" x2=\"" +
           num(margin_left) + "\" y2=\"" + num(height - margin_bottom) +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + num(margin_left) + "\" y1=\"" + num(height - margin_bottom) +
           "\" x2=\"" + num(width - margin_right) + "\" y2=\"" + num(height - margin_bottom) +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + num(margin_left + plot_w / 2.0) + "\" y=\"" + num(height - 12.0) +
           "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#333333\">t (0 to " +
           std::to_string(t_max) + ")</text>\n";
    svg += "<text x=\"16\" y=\"" + num(margin_top + plot_h / 2.0) +
           "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#333333\" transform=\"rotate(-90 16 " +
           num(margin_top + plot_h / 2.0) + ")\">cross-edge share x</text>\n";

    std::size_t color = 0;
    double legend_y = margin_top + 14.0;
    for (const auto& [label, s] : series) {
        const char* stroke = palette[color % (sizeof(palette) / sizeof(palette[0]))];
        std::string points;
        for (const auto& row : s.rows) {
            if (std::isnan(row.x_hat))
                continue;
            points += num(sx(row.t)) + "," + num(sy(row.x_hat)) + " ";
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) +
               "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        svg += "<text x=\"" + num(width - margin_right - 6.0) + "\" y=\"" + num(legend_y) +
               "\" font-size=\"12\" text-anchor=\"end\" fill=\"" + stroke + "\">" + label +
               "</text>\n";
        legend_y += 16.0;
        ++color;
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace fragnet
