// SPDX-License-Identifier: Apache-2.0
//
// Minimal SVG line plots.

#ifndef BIVAR_PIPELINE_SVG_HPP
#define BIVAR_PIPELINE_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace bivar::pipeline::svg {

inline std::string escape(const std::string& s)
{
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

inline std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Style {
    std::string stroke = "black";
    double width = 1.0;
    std::string dash;  ///< stroke-dasharray, empty for solid
};

/// A rectangular plotting area with its own data ranges.
class Panel {
public:
    Panel(double x, double y, double w, double h) : x_(x), y_(y), w_(w), h_(h) {}

    void include(double x, double y)
    {
        if (!std::isfinite(x) || !std::isfinite(y)) return;
        xmin_ = std::min(xmin_, x);
        xmax_ = std::max(xmax_, x);
        ymin_ = std::min(ymin_, y);
        ymax_ = std::max(ymax_, y);
    }
    /// Same scale on both axes (for trajectories).
    void equal_aspect(bool on) { equal_ = on; }
    void title(std::string t) { title_ = std::move(t); }
    void xlabel(std::string t) { xlabel_ = std::move(t); }

    /// Breaks the line wherever `keep` is false or a value is non-finite.
    void line(const std::vector<double>& xs, const std::vector<double>& ys, const Style& s,
              const std::vector<bool>& keep = {})
    {
        for (std::size_t k = 0; k < xs.size(); ++k)
            if (keep.empty() || keep[k]) include(xs[k], ys[k]);
        lines_.push_back({xs, ys, keep, s});
    }
    void marker(double x, double y, const std::string& shape)
    {
        include(x, y);
        markers_.push_back({x, y, shape});
    }

    std::string render() const
    {
        double x0 = xmin_, x1 = xmax_, y0 = ymin_, y1 = ymax_;
        if (!(x1 > x0)) { x0 -= 1.0; x1 += 1.0; }
        if (!(y1 > y0)) { y0 -= 1.0; y1 += 1.0; }
        const double pad = 0.05;
        const double dx = (x1 - x0) * pad, dy = (y1 - y0) * pad;
        x0 -= dx; x1 += dx; y0 -= dy; y1 += dy;
        double sx = w_ / (x1 - x0), sy = h_ / (y1 - y0);
        double ox = 0.0, oy = 0.0;
        if (equal_) {
            const double s = std::min(sx, sy);
            ox = (w_ - s * (x1 - x0)) / 2.0;
            oy = (h_ - s * (y1 - y0)) / 2.0;
            sx = sy = s;
        }
        auto px = [&](double v) { return x_ + ox + (v - x0) * sx; };
        auto py = [&](double v) { return y_ + h_ - oy - (v - y0) * sy; };

        std::ostringstream o;
        o << "<rect x=\"" << num(x_) << "\" y=\"" << num(y_) << "\" width=\"" << num(w_) << "\" height=\"" << num(h_)
          << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"0.5\"/>\n";
        if (!title_.empty())
            o << "<text x=\"" << num(x_ + 4) << "\" y=\"" << num(y_ - 4)
              << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(title_) << "</text>\n";
        if (!xlabel_.empty())
            o << "<text x=\"" << num(x_ + w_ / 2) << "\" y=\"" << num(y_ + h_ + 24)
              << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" << escape(xlabel_)
              << "</text>\n";
        const double vx0 = x0 - ox / sx, vx1 = x1 + ox / sx, vy0 = y0 - oy / sy, vy1 = y1 + oy / sy;
        for (double yv : ticks(vy0, vy1))
            o << "<text x=\"" << num(x_ - 3) << "\" y=\"" << num(py(yv) + 3)
              << "\" font-family=\"sans-serif\" font-size=\"8\" text-anchor=\"end\">" << tick(yv) << "</text>\n"
              << "<line x1=\"" << num(x_) << "\" y1=\"" << num(py(yv)) << "\" x2=\"" << num(x_ + 3) << "\" y2=\""
              << num(py(yv)) << "\" stroke=\"#888\" stroke-width=\"0.5\"/>\n";
        for (double xv : ticks(vx0, vx1))
            o << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(y_ + h_ + 10)
              << "\" font-family=\"sans-serif\" font-size=\"8\" text-anchor=\"middle\">" << tick(xv) << "</text>\n"
              << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << num(y_ + h_) << "\" x2=\"" << num(px(xv))
              << "\" y2=\"" << num(y_ + h_ - 3) << "\" stroke=\"#888\" stroke-width=\"0.5\"/>\n";
        if (y0 < 0.0 && y1 > 0.0 && !equal_)
            o << "<line x1=\"" << num(x_) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(x_ + w_) << "\" y2=\""
              << num(py(0)) << "\" stroke=\"#ccc\" stroke-width=\"0.5\"/>\n";
        for (const auto& l : lines_) {
            std::string pts;
            auto flush = [&] {
                if (pts.empty()) return;
                o << "<polyline fill=\"none\" stroke=\"" << l.style.stroke << "\" stroke-width=\""
                  << num(l.style.width) << "\"";
                if (!l.style.dash.empty()) o << " stroke-dasharray=\"" << l.style.dash << "\"";
                o << " points=\"" << pts << "\"/>\n";
                pts.clear();
            };
            for (std::size_t k = 0; k < l.xs.size(); ++k) {
                const bool ok = (l.keep.empty() || l.keep[k]) && std::isfinite(l.xs[k]) && std::isfinite(l.ys[k]);
                if (!ok) {
                    flush();
                    continue;
                }
                pts += num(px(l.xs[k])) + "," + num(py(l.ys[k])) + " ";
            }
            flush();
        }
        for (const auto& m : markers_) {
            const double cx = px(m.x), cy = py(m.y);
            if (m.shape == "circle") {
                o << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy)
                  << "\" r=\"4\" fill=\"none\" stroke=\"black\"/>\n";
            } else if (m.shape == "triangle") {
                o << "<polygon points=\"" << num(cx) << "," << num(cy - 5) << " " << num(cx - 4.5) << ","
                  << num(cy + 4) << " " << num(cx + 4.5) << "," << num(cy + 4) << "\" fill=\"black\"/>\n";
            } else {
                o << "<path d=\"M" << num(cx - 4) << "," << num(cy - 4) << " L" << num(cx + 4) << "," << num(cy + 4)
                  << " M" << num(cx - 4) << "," << num(cy + 4) << " L" << num(cx + 4) << "," << num(cy - 4)
                  << "\" stroke=\"black\" stroke-width=\"1.2\"/>\n";
            }
        }
        return o.str();
    }

private:
    struct Line {
        std::vector<double> xs, ys;
        std::vector<bool> keep;
        Style style;
    };
    struct Marker {
        double x, y;
        std::string shape;
    };

    /// Multiples of a 1, 2 or 5 step giving about five ticks in [lo, hi].
    static std::vector<double> ticks(double lo, double hi)
    {
        std::vector<double> out;
        const double raw = (hi - lo) / 5.0;
        if (!(raw > 0.0) || !std::isfinite(raw)) return out;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        const double f = raw / mag;
        const double step = (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
        for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step)
            out.push_back(std::abs(v) < 1e-9 * step ? 0.0 : v);
        return out;
    }

    static std::string tick(double v)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", v);
        return buf;
    }

    double x_, y_, w_, h_;
    double xmin_ = std::numeric_limits<double>::infinity(), xmax_ = -std::numeric_limits<double>::infinity();
    double ymin_ = std::numeric_limits<double>::infinity(), ymax_ = -std::numeric_limits<double>::infinity();
    bool equal_ = false;
    std::string title_, xlabel_;
    std::vector<Line> lines_;
    std::vector<Marker> markers_;
};

inline std::string document(double w, double h, const std::vector<Panel>& panels, const std::string& caption = {})
{
    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
      << "\" viewBox=\"0 0 " << num(w) << " " << num(h) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!caption.empty())
        o << "<text x=\"" << num(w / 2) << "\" y=\"16\" font-family=\"sans-serif\" font-size=\"13\" "
          << "text-anchor=\"middle\">" << escape(caption) << "</text>\n";
    for (const auto& p : panels) o << p.render();
    o << "</svg>\n";
    return o.str();
}

} // namespace bivar::pipeline::svg

#endif // BIVAR_PIPELINE_SVG_HPP
