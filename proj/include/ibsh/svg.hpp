// Self-contained SVG line charts (linear or log-log axes); no plotting
// dependency, the figures here are line charts only.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ibsh {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    int width = 720;
    int height = 480;
};

void write_svg_lines(const std::filesystem::path& path, const std::vector<Series>& series,
                     const PlotOptions& opts);

}  // namespace ibsh
