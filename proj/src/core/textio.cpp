#include "core/textio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace nanomac::textio {

std::string format_number(double value) {
    if (value == 0.0) return "0";  // normalize -0
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 6);
    return std::string(buf, ptr);
}

void append_csv_field(std::string& out, double value, bool last) {
    out += format_number(value);
    out.push_back(last ? '\n' : ',');
}

void append_csv_field(std::string& out, std::uint64_t value, bool last) {
    out += std::to_string(value);
    out.push_back(last ? '\n' : ',');
}

void append_csv_field(std::string& out, const std::string& value, bool last) {
    out += value;
    out.push_back(last ? '\n' : ',');
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v) { return format_number(v); }

} // namespace

std::string render_line_plot_svg(const std::string& title, const std::string& x_label,
                                 const std::string& y_label,
                                 const std::vector<Series>& series) {
    const double width = 860, height = 520;
    const double left = 70, right = 210, top = 40, bottom = 50;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    bool first = true;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (first) {
                x_min = x_max = x;
                y_min = y_max = y;
                first = false;
            }
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    if (x_max == x_min) x_max = x_min + 1;
    if (y_max == y_min) y_max = y_min + 1;

    auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return top + plot_h - (y - y_min) / (y_max - y_min) * plot_h; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
           fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(width / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" + title + "</text>\n";

    // frame and ticks
    svg += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(plot_w) +
           "\" height=\"" + fmt(plot_h) + "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = x_min + (x_max - x_min) * i / 5.0;
        const double fy = y_min + (y_max - y_min) * i / 5.0;
        svg += "<line x1=\"" + fmt(px(fx)) + "\" y1=\"" + fmt(top + plot_h) + "\" x2=\"" +
               fmt(px(fx)) + "\" y2=\"" + fmt(top + plot_h + 5) + "\" stroke=\"#444\"/>\n";
        svg += "<text x=\"" + fmt(px(fx)) + "\" y=\"" + fmt(top + plot_h + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               fmt(fx) + "</text>\n";
        svg += "<line x1=\"" + fmt(left - 5) + "\" y1=\"" + fmt(py(fy)) + "\" x2=\"" + fmt(left) +
               "\" y2=\"" + fmt(py(fy)) + "\" stroke=\"#444\"/>\n";
        svg += "<text x=\"" + fmt(left - 9) + "\" y=\"" + fmt(py(fy) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(fy) +
               "</text>\n";
    }
    svg += "<text x=\"" + fmt(left + plot_w / 2) + "\" y=\"" + fmt(height - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + x_label +
           "</text>\n";
    svg += "<text x=\"18\" y=\"" + fmt(top + plot_h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 " + fmt(top + plot_h / 2) + ")\">" + y_label + "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % (sizeof kPalette / sizeof kPalette[0])];
        std::string pts;
        for (auto [x, y] : series[i].points)
            pts += fmt(px(x)) + "," + fmt(py(y)) + " ";
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        const double ly = top + 16 + 16 * double(i);
        svg += "<line x1=\"" + fmt(left + plot_w + 12) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" +
               fmt(left + plot_w + 34) + "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt(left + plot_w + 40) + "\" y=\"" + fmt(ly) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + series[i].label + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace nanomac::textio
