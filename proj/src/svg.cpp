#include "ibsh/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ibsh {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

void write_svg_lines(const std::filesystem::path& path, const std::vector<Series>& series,
                     const PlotOptions& opts) {
    const double margin_l = 70, margin_r = 20, margin_t = 40, margin_b = 50;
    const double plot_w = opts.width - margin_l - margin_r;
    const double plot_h = opts.height - margin_t - margin_b;

    auto tx = [&](double v) { return opts.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return opts.log_y ? std::log10(v) : v; };

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const Series& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("write_svg_lines: x/y size mismatch in " + s.label);
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (opts.log_x && !(s.x[i] > 0.0)) continue;
            if (opts.log_y && !(s.y[i] > 0.0)) continue;
            x_lo = std::min(x_lo, tx(s.x[i]));
            x_hi = std::max(x_hi, tx(s.x[i]));
            y_lo = std::min(y_lo, ty(s.y[i]));
            y_hi = std::max(y_hi, ty(s.y[i]));
        }
    }
    if (!(x_hi >= x_lo) || !(y_hi >= y_lo)) { x_lo = y_lo = 0.0; x_hi = y_hi = 1.0; }
    if (x_hi == x_lo) { x_lo -= 0.5; x_hi += 0.5; }
    if (y_hi == y_lo) { y_lo -= 0.5; y_hi += 0.5; }

    auto px = [&](double v) { return margin_l + (tx(v) - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double v) { return margin_t + (y_hi - ty(v)) / (y_hi - y_lo) * plot_h; };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
        << opts.height << "\" viewBox=\"0 0 " << opts.width << " " << opts.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << opts.width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << opts.title << "</text>\n";

    // Frame and tick labels.
    out << "<rect x=\"" << margin_l << "\" y=\"" << margin_t << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";
    const int ticks = 5;
    for (int k = 0; k <= ticks; ++k) {
        const double fx = x_lo + (x_hi - x_lo) * k / ticks;
        const double fy = y_lo + (y_hi - y_lo) * k / ticks;
        const double sx = margin_l + plot_w * k / ticks;
        const double sy = margin_t + plot_h - plot_h * k / ticks;
        const double lx = opts.log_x ? std::pow(10.0, fx) : fx;
        const double ly = opts.log_y ? std::pow(10.0, fy) : fy;
        out << "<line x1=\"" << sx << "\" y1=\"" << margin_t + plot_h << "\" x2=\"" << sx
            << "\" y2=\"" << margin_t + plot_h + 5 << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << sx << "\" y=\"" << margin_t + plot_h + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(lx)
            << "</text>\n";
        out << "<line x1=\"" << margin_l - 5 << "\" y1=\"" << sy << "\" x2=\"" << margin_l
            << "\" y2=\"" << sy << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << margin_l - 8 << "\" y=\"" << sy + 3
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(ly)
            << "</text>\n";
    }
    out << "<text x=\"" << margin_l + plot_w / 2 << "\" y=\"" << opts.height - 8
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << opts.x_label << "</text>\n";
    out << "<text x=\"14\" y=\"" << margin_t + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 14 " << margin_t + plot_h / 2 << ")\">" << opts.y_label
        << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const Series& s = series[si];
        const char* color = kColors[si % (sizeof(kColors) / sizeof(kColors[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (opts.log_x && !(s.x[i] > 0.0)) continue;
            if (opts.log_y && !(s.y[i] > 0.0)) continue;
            out << fmt(px(s.x[i])) << "," << fmt(py(s.y[i])) << " ";
        }
        out << "\"/>\n";
        out << "<text x=\"" << margin_l + plot_w - 6 << "\" y=\""
            << margin_t + 16 + 14 * static_cast<double>(si)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
            << color << "\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace ibsh
