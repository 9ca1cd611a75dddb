#pragma once

// Minimal static SVG charts for run reports.

#include <filesystem>
#include <string>
#include <vector>

namespace slicesim {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotLabels {
    std::string title;
    std::string x_label;
    std::string y_label;
};

/// Polyline chart; with `steps` each segment is drawn as a staircase (CCDFs).
std::string line_chart_svg(const std::vector<Series>& series, const PlotLabels& labels, bool steps = false);

std::string bar_chart_svg(const std::vector<std::string>& names, const std::vector<double>& values,
                          const PlotLabels& labels);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace slicesim
