#ifndef NANOMAC_CORE_TEXTIO_HPP
#define NANOMAC_CORE_TEXTIO_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nanomac::textio {

// Locale-independent number rendering, up to 6 significant digits. Every CSV
// and SVG byte must be reproducible across platforms, so this is the only
// float formatter the library uses.
std::string format_number(double value);

void append_csv_field(std::string& out, double value, bool last = false);
void append_csv_field(std::string& out, std::uint64_t value, bool last = false);
void append_csv_field(std::string& out, const std::string& value, bool last = false);

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

// Minimal self-contained SVG polyline chart (no rendering dependencies).
std::string render_line_plot_svg(const std::string& title, const std::string& x_label,
                                 const std::string& y_label, const std::vector<Series>& series);

} // namespace nanomac::textio

#endif
