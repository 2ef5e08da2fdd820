#include "bellfield/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace bellfield::svg {

namespace {

constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 78, kRight = 24, kTop = 40, kBottom = 58;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Scale {
    bool log;
    double lo, hi;    // transformed range
    double p0, p1;    // pixel range

    double t(double v) const { return log ? std::log10(v) : v; }
    double operator()(double v) const { return p0 + (t(v) - lo) / (hi - lo) * (p1 - p0); }
};

void data_range(const Axis& ax, const std::vector<double>& vals, double& lo, double& hi) {
    if (ax.min != ax.max) {
        lo = ax.log ? std::log10(ax.min) : ax.min;
        hi = ax.log ? std::log10(ax.max) : ax.max;
        return;
    }
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (double v : vals) {
        if (!std::isfinite(v) || (ax.log && v <= 0.0)) continue;
        double t = ax.log ? std::log10(v) : v;
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    if (!std::isfinite(lo)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-12) {
        double pad = ax.log ? 0.5 : std::max(0.5 * std::fabs(lo), 0.5);
        lo -= pad;
        hi += pad;
    } else if (!ax.log) {
        double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
}

struct Tick {
    double t;  // transformed position
    std::string label;
};

std::vector<Tick> ticks(bool log, double lo, double hi) {
    std::vector<Tick> out;
    if (log) {
        int a = int(std::ceil(lo - 1e-9)), b = int(std::floor(hi + 1e-9));
        int step = std::max(1, (b - a + 7) / 8);
        for (int k = a; k <= b; k += step)
            out.push_back({double(k), "10<tspan dy=\"-6\" font-size=\"9\">" + std::to_string(k) + "</tspan>"});
        return out;
    }
    double span = hi - lo;
    double raw = span / 6.0;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) {
        double r = std::fabs(v) < 1e-12 * step ? 0.0 : v;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", r);
        out.push_back({r, buf});
    }
    return out;
}

void frame(std::ostringstream& o, const Scale& sx, const Scale& sy, const Axis& ax, const Axis& ay,
           const std::string& title) {
    double x0 = sx.p0, x1 = sx.p1, y0 = sy.p0, y1 = sy.p1;  // y0 is the bottom
    o << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0) << "\" height=\""
      << num(y0 - y1) << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (const Tick& t : ticks(sx.log, sx.lo, sx.hi)) {
        double px = sx.p0 + (t.t - sx.lo) / (sx.hi - sx.lo) * (sx.p1 - sx.p0);
        o << "<line x1=\"" << num(px) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(px) << "\" y2=\""
          << num(y0 + 5) << "\" stroke=\"#333\"/>\n";
        o << "<text x=\"" << num(px) << "\" y=\"" << num(y0 + 20) << "\" text-anchor=\"middle\">" << t.label
          << "</text>\n";
    }
    for (const Tick& t : ticks(sy.log, sy.lo, sy.hi)) {
        double py = sy.p0 + (t.t - sy.lo) / (sy.hi - sy.lo) * (sy.p1 - sy.p0);
        o << "<line x1=\"" << num(x0 - 5) << "\" y1=\"" << num(py) << "\" x2=\"" << num(x0) << "\" y2=\""
          << num(py) << "\" stroke=\"#333\"/>\n";
        o << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(py + 4) << "\" text-anchor=\"end\">" << t.label
          << "</text>\n";
    }
    o << "<text x=\"" << num(0.5 * (x0 + x1)) << "\" y=\"" << num(y0 + 44)
      << "\" text-anchor=\"middle\">" << escape(ax.label) << "</text>\n";
    o << "<text transform=\"translate(" << num(x0 - 58) << "," << num(0.5 * (y0 + y1))
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(ay.label) << "</text>\n";
    o << "<text x=\"" << num(0.5 * (x0 + x1)) << "\" y=\"" << num(y1 - 14)
      << "\" text-anchor=\"middle\" font-size=\"14\">" << escape(title) << "</text>\n";
}

void line_body(std::ostringstream& o, const LinePlot& p, double ox, double oy) {
    std::vector<double> xs, ys;
    for (const Series& s : p.series) {
        xs.insert(xs.end(), s.x.begin(), s.x.end());
        ys.insert(ys.end(), s.y.begin(), s.y.end());
    }
    Scale sx{p.x.log, 0, 0, ox + kLeft, ox + kWidth - kRight};
    Scale sy{p.y.log, 0, 0, oy + kHeight - kBottom, oy + kTop};
    data_range(p.x, xs, sx.lo, sx.hi);
    data_range(p.y, ys, sy.lo, sy.hi);
    frame(o, sx, sy, p.x, p.y, p.title);
    o << "<g clip-path=\"url(#clip" << int(ox) << ")\">\n";
    for (const Series& s : p.series) {
        std::string pts;
        auto flush = [&] {
            if (pts.empty()) return;
            o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"";
            if (!s.dash.empty()) o << " stroke-dasharray=\"" << s.dash << "\"";
            o << " points=\"" << pts << "\"/>\n";
            pts.clear();
        };
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            bool ok = std::isfinite(s.x[i]) && std::isfinite(s.y[i]) && !(p.x.log && s.x[i] <= 0.0) &&
                      !(p.y.log && s.y[i] <= 0.0);
            if (!ok) {
                flush();
                continue;
            }
            pts += num(sx(s.x[i])) + "," + num(sy(s.y[i])) + " ";
        }
        flush();
    }
    o << "</g>\n";
    double lx = sx.p1 - 190, ly = sy.p1 + 16;
    for (const Series& s : p.series) {
        if (s.label.empty()) continue;
        o << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 26) << "\" y2=\""
          << num(ly - 4) << "\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"";
        if (!s.dash.empty()) o << " stroke-dasharray=\"" << s.dash << "\"";
        o << "/>\n<text x=\"" << num(lx + 32) << "\" y=\"" << num(ly) << "\">" << escape(s.label) << "</text>\n";
        ly += 16;
    }
}

void header(std::ostringstream& o, double w, double h) {
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(w) << "\" height=\"" << num(h)
      << "\" viewBox=\"0 0 " << num(w) << " " << num(h) << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void clip(std::ostringstream& o, double ox, double oy) {
    o << "<defs><clipPath id=\"clip" << int(ox) << "\"><rect x=\"" << num(ox + kLeft) << "\" y=\"" << num(oy + kTop)
      << "\" width=\"" << num(kWidth - kLeft - kRight) << "\" height=\"" << num(kHeight - kTop - kBottom)
      << "\"/></clipPath></defs>\n";
}

// viridis, sampled at nine points
std::string colour(double t) {
    static const std::array<std::array<double, 3>, 9> c = {{{68, 1, 84},
                                                              {71, 44, 122},
                                                              {59, 81, 139},
                                                              {44, 113, 142},
                                                              {33, 144, 141},
                                                              {39, 173, 129},
                                                              {92, 200, 99},
                                                              {170, 220, 50},
                                                              {253, 231, 37}}};
    t = std::clamp(t, 0.0, 1.0) * 8.0;
    int i = std::min(7, int(t));
    double f = t - i;
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", int(std::lround(c[i][0] + f * (c[i + 1][0] - c[i][0]))),
                  int(std::lround(c[i][1] + f * (c[i + 1][1] - c[i][1]))),
                  int(std::lround(c[i][2] + f * (c[i + 1][2] - c[i][2]))));
    return buf;
}

}  // namespace

std::vector<Segment> marching_squares(const std::vector<double>& xs, const std::vector<double>& ys,
                                      const std::vector<double>& z, double level) {
    std::vector<Segment> out;
    const std::size_t nx = xs.size(), ny = ys.size();
    if (nx < 2 || ny < 2 || z.size() != nx * ny) return out;
    auto at = [&](std::size_t i, std::size_t j) { return z[j * nx + i]; };
    for (std::size_t j = 0; j + 1 < ny; ++j) {
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            // corners counter-clockwise from (i, j)
            double v[4] = {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
            if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[2]) || !std::isfinite(v[3]))
                continue;
            double cx[4] = {xs[i], xs[i + 1], xs[i + 1], xs[i]};
            double cy[4] = {ys[j], ys[j], ys[j + 1], ys[j + 1]};
            int code = 0;
            for (int k = 0; k < 4; ++k)
                if (v[k] >= level) code |= 1 << k;
            if (code == 0 || code == 15) continue;
            // crossing point on edge k (corner k to corner k+1)
            auto edge = [&](int k, double& px, double& py) {
                int a = k, b = (k + 1) % 4;
                double t = (level - v[a]) / (v[b] - v[a]);
                px = cx[a] + t * (cx[b] - cx[a]);
                py = cy[a] + t * (cy[b] - cy[a]);
            };
            std::vector<int> crossed;
            for (int k = 0; k < 4; ++k) {
                bool a = (code >> k) & 1, b = (code >> ((k + 1) % 4)) & 1;
                if (a != b) crossed.push_back(k);
            }
            auto add = [&](int e0, int e1) {
                Segment s;
                edge(e0, s.x0, s.y0);
                edge(e1, s.x1, s.y1);
                out.push_back(s);
            };
            if (crossed.size() == 2) {
                add(crossed[0], crossed[1]);
            } else if (crossed.size() == 4) {
                // saddle: the centre value decides which corners connect
                double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                bool c0 = v[0] >= level;
                if ((centre >= level) == c0) {
                    add(0, 1);
                    add(2, 3);
                } else {
                    add(3, 0);
                    add(1, 2);
                }
            }
        }
    }
    return out;
}

std::string render(const LinePlot& plot) {
    std::ostringstream o;
    header(o, kWidth, kHeight);
    clip(o, 0, 0);
    line_body(o, plot, 0, 0);
    o << "</svg>\n";
    return o.str();
}

std::string render_panels(const std::vector<LinePlot>& panels) {
    std::ostringstream o;
    header(o, kWidth * panels.size(), kHeight);
    for (std::size_t k = 0; k < panels.size(); ++k) clip(o, kWidth * k, 0);
    for (std::size_t k = 0; k < panels.size(); ++k) line_body(o, panels[k], kWidth * k, 0);
    o << "</svg>\n";
    return o.str();
}

std::string render(const Heatmap& m) {
    const double bar = 70;
    std::ostringstream o;
    header(o, kWidth + bar, kHeight);
    Scale sx{m.x.log, 0, 0, kLeft, kWidth - kRight};
    Scale sy{m.y.log, 0, 0, kHeight - kBottom, kTop};
    Axis ax = m.x, ay = m.y;
    data_range(Axis{ax.label, ax.log, ax.min, ax.max}, m.xs, sx.lo, sx.hi);
    data_range(Axis{ay.label, ay.log, ay.min, ay.max}, m.ys, sy.lo, sy.hi);
    // the grid fills the frame exactly
    if (!m.xs.empty()) {
        sx.lo = sx.t(m.xs.front());
        sx.hi = sx.t(m.xs.back());
    }
    if (!m.ys.empty()) {
        sy.lo = sy.t(m.ys.front());
        sy.hi = sy.t(m.ys.back());
    }
    double zlo = std::numeric_limits<double>::infinity(), zhi = -zlo;
    for (double v : m.z)
        if (std::isfinite(v)) {
            zlo = std::min(zlo, v);
            zhi = std::max(zhi, v);
        }
    if (!std::isfinite(zlo)) {
        zlo = 0;
        zhi = 1;
    }
    if (zhi - zlo < 1e-12) zhi = zlo + 1.0;
    const std::size_t nx = m.xs.size(), ny = m.ys.size();
    std::vector<double> tx(nx), ty(ny);
    for (std::size_t i = 0; i < nx; ++i) tx[i] = sx.t(m.xs[i]);
    for (std::size_t j = 0; j < ny; ++j) ty[j] = sy.t(m.ys[j]);
    auto px = [&](double t) { return sx.p0 + (t - sx.lo) / (sx.hi - sx.lo) * (sx.p1 - sx.p0); };
    auto py = [&](double t) { return sy.p0 + (t - sy.lo) / (sy.hi - sy.lo) * (sy.p1 - sy.p0); };
    // cell edges halfway between grid points
    auto edges = [](const std::vector<double>& t) {
        std::vector<double> e(t.size() + 1);
        for (std::size_t k = 1; k < t.size(); ++k) e[k] = 0.5 * (t[k - 1] + t[k]);
        e.front() = t.front();
        e.back() = t.back();
        return e;
    };
    auto ex = edges(tx), ey = edges(ty);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            double v = m.z[j * nx + i];
            double x0 = px(ex[i]), x1 = px(ex[i + 1]), y0 = py(ey[j + 1]), y1 = py(ey[j]);
            o << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(x1 - x0 + 0.3)
              << "\" height=\"" << num(y1 - y0 + 0.3) << "\" fill=\""
              << (std::isfinite(v) ? colour((v - zlo) / (zhi - zlo)) : std::string("#bbbbbb")) << "\"/>\n";
        }
    }
    for (double level : m.levels) {
        auto segs = marching_squares(tx, ty, m.z, level);
        if (segs.empty()) continue;
        o << "<path fill=\"none\" stroke=\"white\" stroke-width=\"1.2\" d=\"";
        for (const Segment& s : segs)
            o << "M" << num(px(s.x0)) << " " << num(py(s.y0)) << "L" << num(px(s.x1)) << " " << num(py(s.y1));
        o << "\"/>\n";
        const Segment& s = segs[segs.size() / 2];
        o << "<text x=\"" << num(px(s.x0)) << "\" y=\"" << num(py(s.y0) - 3)
          << "\" fill=\"white\" font-size=\"9\">" << level << "</text>\n";
    }
    frame(o, sx, sy, m.x, m.y, m.title);
    // colour bar
    double bx = kWidth + 6, bw = 16, top = kTop, bottom = kHeight - kBottom;
    const int steps = 64;
    for (int k = 0; k < steps; ++k) {
        double y0 = bottom - (k + 1) * (bottom - top) / steps;
        o << "<rect x=\"" << num(bx) << "\" y=\"" << num(y0) << "\" width=\"" << num(bw) << "\" height=\""
          << num((bottom - top) / steps + 0.3) << "\" fill=\"" << colour((k + 0.5) / steps) << "\"/>\n";
    }
    o << "<rect x=\"" << num(bx) << "\" y=\"" << num(top) << "\" width=\"" << num(bw) << "\" height=\""
      << num(bottom - top) << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (const Tick& t : ticks(false, zlo, zhi)) {
        double y = bottom - (t.t - zlo) / (zhi - zlo) * (bottom - top);
        o << "<line x1=\"" << num(bx + bw) << "\" y1=\"" << num(y) << "\" x2=\"" << num(bx + bw + 4) << "\" y2=\""
          << num(y) << "\" stroke=\"#333\"/>\n<text x=\"" << num(bx + bw + 6) << "\" y=\"" << num(y + 4) << "\">"
          << t.label << "</text>\n";
    }
    o << "<text x=\"" << num(bx) << "\" y=\"" << num(top - 8) << "\">" << escape(m.z_label) << "</text>\n";
    o << "</svg>\n";
    return o.str();
}

}  // namespace bellfield::svg
