#pragma once

#include <string>
#include <vector>

namespace bellfield::svg {

struct Axis {
    std::string label;
    bool log = false;
    double min = 0.0, max = 0.0;  // min == max: fit to the data
};

struct Series {
    std::string label;
    std::vector<double> x, y;
    std::string color = "#1f77b4";
    std::string dash;  // empty: solid, otherwise an SVG dasharray
};

struct LinePlot {
    std::string title;
    Axis x, y;
    std::vector<Series> series;
};

struct Heatmap {
    std::string title;
    Axis x, y;
    std::string z_label;
    std::vector<double> xs, ys;  // grid coordinates
    std::vector<double> z;       // z[j * xs.size() + i] at (xs[i], ys[j]); NaN marks a missing point
    std::vector<double> levels;  // contour levels
};

struct Segment {
    double x0, y0, x1, y1;
};

// iso-line of z at `level` on a rectilinear grid, in grid coordinates
std::vector<Segment> marching_squares(const std::vector<double>& xs, const std::vector<double>& ys,
                                      const std::vector<double>& z, double level);

std::string render(const LinePlot& plot);
std::string render_panels(const std::vector<LinePlot>& panels);
std::string render(const Heatmap& map);

}  // namespace bellfield::svg
