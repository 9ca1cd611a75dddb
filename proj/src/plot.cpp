#include "slicesim/plot.hpp"

#include "slicesim/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace slicesim {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
constexpr std::array<const char*, 6> kColors = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string& s) {
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

struct Frame {
    double x0, x1, y0, y1;
    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void widen(double& lo, double& hi) {
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
}

void axes(std::ostringstream& svg, const Frame& f, const PlotLabels& labels) {
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(labels.title)
        << "</text>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << f.py(f.y0) << "\" x2=\"" << kWidth - kRight << "\" y2=\""
        << f.py(f.y0) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << f.py(f.y0)
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
        const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
        svg << "<text x=\"" << f.px(xv) << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">"
            << format_number(std::round(xv * 1000) / 1000) << "</text>\n";
        svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << f.py(yv) + 4 << "\" text-anchor=\"end\">"
            << format_number(std::round(yv * 1000) / 1000) << "</text>\n";
    }
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
        << escape(labels.x_label) << "</text>\n";
    svg << "<text x=\"16\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << kHeight / 2 << ")\">" << escape(labels.y_label) << "</text>\n";
}

}  // namespace

std::string line_chart_svg(const std::vector<Series>& series, const PlotLabels& labels, bool steps) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw std::invalid_argument("line_chart_svg: x and y sizes differ");
        for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
        for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
    }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    widen(x0, x1);
    widen(y0, y1);
    const Frame f{x0, x1, y0, y1};
    std::ostringstream svg;
    axes(svg, f, labels);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = kColors[i % kColors.size()];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t j = 0; j < s.x.size(); ++j) {
            if (steps && j > 0) svg << f.px(s.x[j]) << ',' << f.py(s.y[j - 1]) << ' ';
            svg << f.px(s.x[j]) << ',' << f.py(s.y[j]) << ' ';
        }
        svg << "\"/>\n";
        svg << "<text x=\"" << kWidth - kRight - 4 << "\" y=\"" << kTop + 14 * (i + 1) << "\" text-anchor=\"end\" fill=\""
            << color << "\">" << escape(s.name) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string bar_chart_svg(const std::vector<std::string>& names, const std::vector<double>& values,
                          const PlotLabels& labels) {
    if (names.size() != values.size()) throw std::invalid_argument("bar_chart_svg: names and values differ");
    double y1 = 0.0;
    for (double v : values) y1 = std::max(y1, v);
    if (!(y1 > 0)) y1 = 1.0;
    const Frame f{0.0, static_cast<double>(std::max<std::size_t>(names.size(), 1)), 0.0, y1};
    std::ostringstream svg;
    axes(svg, f, labels);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double left = f.px(i + 0.15), right = f.px(i + 0.85);
        svg << "<rect x=\"" << left << "\" y=\"" << f.py(values[i]) << "\" width=\"" << right - left << "\" height=\""
            << f.py(0) - f.py(values[i]) << "\" fill=\"" << kColors[i % kColors.size()] << "\"/>\n";
        svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << f.py(values[i]) - 4 << "\" text-anchor=\"middle\">"
            << escape(names[i]) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace slicesim
