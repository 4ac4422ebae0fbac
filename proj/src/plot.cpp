#include "equilib/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "equilib/error.hpp"

namespace equilib {

GridLayout grid_layout(const ChargeSystem& sys, const Polytope& X, double eps) {
    const WeakGrid wg = weak_grid(sys, X, eps);
    const double s = 1.0 / sys.scale_x();
    const int d = sys.dim();
    GridLayout g;
    g.dim = d;
    g.rho = wg.rho * s;
    g.bounds = X.bounding_box();
    g.domain_vertices = X.vertices();
    g.charges = sys.charges();
    g.params = wg.gradient.params;
    auto unscale = [&](const Box& b) {
        Box o = b;
        for (int j = 0; j < d; ++j) {
            o.lo[j] *= s;
            o.hi[j] *= s;
        }
        return o;
    };
    for (const auto& c : sys.charges()) {
        Box b{c.position, c.position};
        g.exclusion_boxes.push_back(b.inflated(g.rho));
    }
    const Box nb = X.scaled(sys.scale_x()).bounding_box();
    for (double beta : beta_schedule(wg.gradient.params.beta_min, nb.max_width()))
        for (const auto& b : wg.gradient.cover.boxes(beta)) {
            const Box c = unscale(b).intersection(g.bounds);
            if (!c.empty()) g.cover_boxes.push_back(c);
        }
    for (std::size_t p = 0; p < wg.pieces.size(); ++p) {
        g.piece_bounds.push_back(unscale(wg.pieces[p].region.bounding_box()));
        AxisCuts c = wg.cuts[p];
        for (auto& axis : c.cuts)
            for (auto& v : axis) v *= s;
        g.cuts.push_back(std::move(c));
    }
    return g;
}

std::string grid_csv(const GridLayout& g) {
    std::string out = "piece,axis,index,cut\n";
    char buf[96];
    for (std::size_t p = 0; p < g.cuts.size(); ++p)
        for (int j = 0; j < g.cuts[p].dim(); ++j)
            for (std::size_t i = 0; i < g.cuts[p].cuts[j].size(); ++i) {
                std::snprintf(buf, sizeof buf, "%zu,%d,%zu,%.17g\n", p, j, i, g.cuts[p].cuts[j][i]);
                out += buf;
            }
    return out;
}

namespace {

struct Canvas {
    Box view;
    double scale = 1.0;
    double size = 800.0;
    double margin = 20.0;

    double px(double x) const { return margin + (x - view.lo[0]) * scale; }
    double py(double y) const { return margin + (view.hi[1] - y) * scale; } // y up
};

std::string rect(const Canvas& c, const Box& b, const char* style) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "<rect x=\"%.4f\" y=\"%.4f\" width=\"%.4f\" height=\"%.4f\" %s/>\n", c.px(b.lo[0]),
                  c.py(b.hi[1]), std::max(0.0, b.width(0) * c.scale), std::max(0.0, b.width(1) * c.scale), style);
    return buf;
}

} // namespace

std::string grid_svg(const GridLayout& g) {
    if (g.dim != 2) throw InvalidInput("SVG output needs a two-dimensional instance");
    Canvas c;
    c.view = g.bounds;
    const double span = std::max(g.bounds.width(0), g.bounds.width(1));
    c.scale = span > 0.0 ? c.size / span : 1.0;
    const double W = 2 * c.margin + g.bounds.width(0) * c.scale;
    const double H = 2 * c.margin + g.bounds.width(1) * c.scale;
    char buf[512];
    std::string out;
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.4f %.4f\">\n",
                  W, H, W, H);
    out += buf;
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // domain outline (vertices ordered by angle around the centroid)
    if (g.domain_vertices.size() >= 3) {
        auto v = g.domain_vertices;
        double cx = 0, cy = 0;
        for (const auto& p : v) {
            cx += p[0] / v.size();
            cy += p[1] / v.size();
        }
        std::sort(v.begin(), v.end(), [&](const Point& a, const Point& b) {
            return std::atan2(a[1] - cy, a[0] - cx) < std::atan2(b[1] - cy, b[0] - cx);
        });
        out += "<polygon class=\"domain\" fill=\"#f7f7ff\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : v) {
            std::snprintf(buf, sizeof buf, "%.4f,%.4f ", c.px(p[0]), c.py(p[1]));
            out += buf;
        }
        out += "\"/>\n";
    }

    out += "<g class=\"exclusion\">\n";
    for (const auto& b : g.exclusion_boxes)
        out += rect(c, b.intersection(g.bounds), "fill=\"#999999\" fill-opacity=\"0.45\" stroke=\"none\"");
    out += "</g>\n<g class=\"cover\">\n";
    for (const auto& b : g.cover_boxes)
        out += rect(c, b, "fill=\"none\" stroke=\"#3060c0\" stroke-width=\"0.3\" stroke-dasharray=\"2,2\"");
    out += "</g>\n";

    // cut lines; weight and opacity follow log of the local spacing
    out += "<g class=\"cuts\" stroke=\"black\">\n";
    for (std::size_t p = 0; p < g.cuts.size(); ++p) {
        const Box& pb = g.piece_bounds[p];
        for (int j = 0; j < 2; ++j) {
            const auto& v = g.cuts[p].cuts[j];
            for (std::size_t i = 0; i < v.size(); ++i) {
                double gap = INFINITY;
                if (i > 0) gap = std::min(gap, v[i] - v[i - 1]);
                if (i + 1 < v.size()) gap = std::min(gap, v[i + 1] - v[i]);
                if (!std::isfinite(gap) || gap <= 0.0) gap = span;
                const double level = std::clamp(1.0 + std::log2(gap / span) / 24.0, 0.05, 1.0);
                const double w = 0.1 + 0.9 * level;
                if (j == 0)
                    std::snprintf(buf, sizeof buf,
                                  "<line x1=\"%.4f\" y1=\"%.4f\" x2=\"%.4f\" y2=\"%.4f\" stroke-width=\"%.3f\" "
                                  "stroke-opacity=\"%.3f\"/>\n",
                                  c.px(v[i]), c.py(pb.lo[1]), c.px(v[i]), c.py(pb.hi[1]), w, 0.15 + 0.7 * level);
                else
                    std::snprintf(buf, sizeof buf,
                                  "<line x1=\"%.4f\" y1=\"%.4f\" x2=\"%.4f\" y2=\"%.4f\" stroke-width=\"%.3f\" "
                                  "stroke-opacity=\"%.3f\"/>\n",
                                  c.px(pb.lo[0]), c.py(v[i]), c.px(pb.hi[0]), c.py(v[i]), w, 0.15 + 0.7 * level);
                out += buf;
            }
        }
    }
    out += "</g>\n<g class=\"charges\">\n";
    for (const auto& q : g.charges) {
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.4f\" cy=\"%.4f\" r=\"4\" fill=\"%s\"/>\n", c.px(q.position[0]),
                      c.py(q.position[1]), q.q > 0 ? "#d02020" : "#2040d0");
        out += buf;
    }
    out += "</g>\n</svg>\n";
    return out;
}

} // namespace equilib
