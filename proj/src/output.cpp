#include "bohm/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace bohm {

void SvgPlot::set_bounds(double x_min, double x_max, double y_min, double y_max) {
    explicit_bounds_ = true;
    x_min_ = x_min;
    x_max_ = x_max;
    y_min_ = y_min;
    y_max_ = y_max;
}

void SvgPlot::add_points(const std::vector<PlanePoint>& pts, const std::string& color,
                         double radius_px) {
    point_sets_.push_back({pts, color, radius_px});
}

void SvgPlot::add_polyline(const std::vector<PlanePoint>& pts, const std::string& color,
                           double width_px) {
    polylines_.push_back({pts, color, width_px});
}

void SvgPlot::add_marker(PlanePoint p, const std::string& color, double radius_px) {
    markers_.push_back({{p}, color, radius_px});
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string SvgPlot::render() const {
    constexpr double kSize = 800.0;
    constexpr double kMargin = 40.0;

    double x_min = x_min_, x_max = x_max_, y_min = y_min_, y_max = y_max_;
    if (!explicit_bounds_) {
        x_min = y_min = std::numeric_limits<double>::infinity();
        x_max = y_max = -std::numeric_limits<double>::infinity();
        auto grow = [&](const PlanePoint& p) {
            x_min = std::min(x_min, p.x);
            x_max = std::max(x_max, p.x);
            y_min = std::min(y_min, p.y);
            y_max = std::max(y_max, p.y);
        };
        for (const auto& s : point_sets_)
            for (const auto& p : s.pts) grow(p);
        for (const auto& l : polylines_)
            for (const auto& p : l.pts) grow(p);
        for (const auto& m : markers_) grow(m.pts[0]);
        if (!(x_min < x_max) || !(y_min < y_max)) {
            const double cx = std::isfinite(x_min) ? x_min : 0.0;
            const double cy = std::isfinite(y_min) ? y_min : 0.0;
            x_min = cx - 1.0;
            x_max = cx + 1.0;
            y_min = cy - 1.0;
            y_max = cy + 1.0;
        }
    }

    // Equal aspect: pad the smaller span to match the larger.
    const double span = std::max(x_max - x_min, y_max - y_min) * 1.05;
    const double cx = 0.5 * (x_min + x_max);
    const double cy = 0.5 * (y_min + y_max);
    const double lo_x = cx - 0.5 * span, lo_y = cy - 0.5 * span;
    const double scale = (kSize - 2.0 * kMargin) / span;

    auto px = [&](double x) { return kMargin + (x - lo_x) * scale; };
    auto py = [&](double y) { return kSize - kMargin - (y - lo_y) * scale; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
           "viewBox=\"0 0 800 800\">\n";
    svg << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
    if (!title_.empty())
        svg << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"16\">"
            << title_ << "</text>\n";

    // Coordinate axes through the origin, when visible.
    const double hi_x = lo_x + span, hi_y = lo_y + span;
    if (lo_x < 0.0 && hi_x > 0.0)
        svg << "<line x1=\"" << num(px(0)) << "\" y1=\"" << num(py(lo_y)) << "\" x2=\""
            << num(px(0)) << "\" y2=\"" << num(py(hi_y))
            << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    if (lo_y < 0.0 && hi_y > 0.0)
        svg << "<line x1=\"" << num(px(lo_x)) << "\" y1=\"" << num(py(0)) << "\" x2=\""
            << num(px(hi_x)) << "\" y2=\"" << num(py(0))
            << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";

    for (const auto& l : polylines_) {
        if (l.pts.size() < 2) continue;
        svg << "<polyline fill=\"none\" stroke=\"" << l.color << "\" stroke-width=\""
            << num(l.width) << "\" points=\"";
        for (const auto& p : l.pts) svg << num(px(p.x)) << "," << num(py(p.y)) << " ";
        svg << "\"/>\n";
    }
    for (const auto& s : point_sets_)
        for (const auto& p : s.pts)
            svg << "<circle cx=\"" << num(px(p.x)) << "\" cy=\"" << num(py(p.y)) << "\" r=\""
                << num(s.radius) << "\" fill=\"" << s.color << "\"/>\n";
    for (const auto& m : markers_)
        svg << "<circle cx=\"" << num(px(m.pts[0].x)) << "\" cy=\"" << num(py(m.pts[0].y))
            << "\" r=\"" << num(m.radius) << "\" fill=\"none\" stroke=\"" << m.color
            << "\" stroke-width=\"2\"/>\n";

    svg << "</svg>\n";
    return svg.str();
}

void SvgPlot::write(const std::string& path) const { write_text_file(path, render()); }

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

}  // namespace bohm
