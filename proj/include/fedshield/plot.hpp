#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedshield/metrics.hpp"

namespace fedshield::plot {

// Static accuracy-over-rounds line chart, one polyline per series.
inline std::string render_accuracy_svg(const std::vector<metrics::CsvSeries>& series) {
    if (series.empty()) throw std::invalid_argument("plot: need at least one series");
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
    const int width = 760, height = 420;
    const double left = 62, right = 720, top = 30, bottom = 370;

    std::size_t max_len = 1;
    for (const auto& s : series) max_len = std::max(max_len, s.accuracy.size());
    const double x_span = static_cast<double>(max_len > 1 ? max_len - 1 : 1);

    auto sx = [&](std::size_t i) {
        return left + (right - left) * static_cast<double>(i) / x_span;
    };
    auto sy = [&](double acc) { return bottom - (bottom - top) * acc; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";

    // axes and horizontal grid at 0.1 steps
    out << "  <g stroke=\"#333333\" stroke-width=\"1\">\n";
    out << "    <line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right
        << "\" y2=\"" << bottom << "\"/>\n";
    out << "    <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << bottom << "\"/>\n";
    out << "  </g>\n";
    out << "  <g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
    for (int tick = 0; tick <= 10; ++tick) {
        const double acc = tick / 10.0;
        out << "    <line x1=\"" << left - 4 << "\" y1=\"" << sy(acc) << "\" x2=\"" << right
            << "\" y2=\"" << sy(acc) << "\" stroke=\"#dddddd\"/>\n";
        out << "    <text x=\"" << left - 8 << "\" y=\"" << sy(acc) + 4
            << "\" text-anchor=\"end\">" << tick / 10.0 << "</text>\n";
    }
    const std::size_t x_ticks = std::min<std::size_t>(max_len, 11);
    for (std::size_t t = 0; t < x_ticks; ++t) {
        const std::size_t r = t * (max_len - 1) / std::max<std::size_t>(1, x_ticks - 1);
        out << "    <text x=\"" << sx(r) << "\" y=\"" << bottom + 16
            << "\" text-anchor=\"middle\">" << r << "</text>\n";
    }
    out << "    <text x=\"" << (left + right) / 2 << "\" y=\"" << bottom + 34
        << "\" text-anchor=\"middle\">round</text>\n";
    out << "    <text x=\"16\" y=\"" << (top + bottom) / 2
        << "\" transform=\"rotate(-90 16 " << (top + bottom) / 2
        << ")\" text-anchor=\"middle\">accuracy</text>\n";
    out << "  </g>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& pts = series[s].accuracy;
        const char* color = palette[s % std::size(palette)];
        if (pts.size() == 1) {
            out << "  <circle cx=\"" << sx(0) << "\" cy=\"" << sy(pts[0])
                << "\" r=\"4\" fill=\"" << color << "\"/>\n";
        } else {
            out << "  <polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.8\" points=\"";
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (i) out << ' ';
                out << sx(i) << ',' << sy(std::clamp(pts[i], 0.0, 1.0));
            }
            out << "\"/>\n";
        }
        const double ly = top + 16 + 18 * static_cast<double>(s);
        out << "  <line x1=\"" << right - 150 << "\" y1=\"" << ly << "\" x2=\"" << right - 126
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"3\"/>\n";
        out << "  <text x=\"" << right - 120 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">"
            << (series[s].label.empty() ? ("series-" + std::to_string(s)) : series[s].label)
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

inline void emit_plot(const std::vector<metrics::CsvSeries>& series, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("plot: cannot write '" + path + "'");
    out << render_accuracy_svg(series);
}

} // namespace fedshield::plot
