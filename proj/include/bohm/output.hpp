#pragma once

#include <string>
#include <vector>

#include "bohm/types.hpp"

namespace bohm {

/// Scatter/polyline plot emitted as a standalone SVG: fixed 800x800 viewport,
/// equal-aspect axes, bounds from the data unless set explicitly.
class SvgPlot {
public:
    explicit SvgPlot(std::string title = {}) : title_(std::move(title)) {}

    void set_bounds(double x_min, double x_max, double y_min, double y_max);

    void add_points(const std::vector<PlanePoint>& pts, const std::string& color,
                    double radius_px = 1.2);
    void add_polyline(const std::vector<PlanePoint>& pts, const std::string& color,
                      double width_px = 1.0);
    void add_marker(PlanePoint p, const std::string& color, double radius_px = 5.0);

    std::string render() const;
    void write(const std::string& path) const;

private:
    struct PointSet {
        std::vector<PlanePoint> pts;
        std::string color;
        double radius;
    };
    struct Polyline {
        std::vector<PlanePoint> pts;
        std::string color;
        double width;
    };

    std::string title_;
    bool explicit_bounds_ = false;
    double x_min_ = 0, x_max_ = 1, y_min_ = 0, y_max_ = 1;
    std::vector<PointSet> point_sets_;
    std::vector<Polyline> polylines_;
    std::vector<PointSet> markers_;
};

/// Writes text to path, creating parent directories as needed.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace bohm
