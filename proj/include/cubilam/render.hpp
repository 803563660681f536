#pragma once

#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "cubilam/leaf_system.hpp"

namespace cubilam {

struct RenderSpec {
    int size = 800;  // pixels, >= 64
    enum class Style { hyperbolic_arc, straight_chord };
    Style geodesic_style = Style::hyperbolic_arc;
    bool labels = false;
    std::set<Chord> highlight;
};

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    // normalize negative zero for byte-stable output
    if (v == 0.0) v = 0.0;
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct Pt {
    double x, y;
};

// svg y-axis points down; negate the sine so angles run counterclockwise
inline Pt circle_point(const Angle& t) {
    double a = 6.283185307179586476925286766559 * t.to_double();
    return {std::cos(a), -std::sin(a)};
}

/// Path element for one leaf: the circular arc orthogonal to the unit circle
/// through both endpoints, or a straight segment for diameters and the
/// straight-chord style.
inline std::string leaf_path(const Chord& c, RenderSpec::Style style) {
    Pt p = circle_point(c.a), q = circle_point(c.b);
    bool straight = style == RenderSpec::Style::straight_chord ||
                    arc_length(c.a, c.b) == Rational(1, 2);
    if (straight) {
        return "M " + fmt(p.x) + " " + fmt(p.y) + " L " + fmt(q.x) + " " + fmt(q.y);
    }
    // centre of the orthogonal circle: (p + q) / (1 + p.q)
    double dot = p.x * q.x + p.y * q.y;
    double cx = (p.x + q.x) / (1.0 + dot);
    double cy = (p.y + q.y) / (1.0 + dot);
    double r = std::sqrt(cx * cx + cy * cy - 1.0);
    // the intra-disk arc is always the minor one; pick the sweep whose
    // midpoint lies inside the unit circle
    double a0 = std::atan2(p.y - cy, p.x - cx);
    double a1 = std::atan2(q.y - cy, q.x - cx);
    double delta = std::remainder(a1 - a0, 6.283185307179586476925286766559);
    double mid = a0 + delta / 2;
    double mx = cx + r * std::cos(mid), my = cy + r * std::sin(mid);
    int sweep = (mx * mx + my * my <= 1.0) == (delta > 0) ? 1 : 0;
    return "M " + fmt(p.x) + " " + fmt(p.y) + " A " + fmt(r) + " " + fmt(r) + " 0 0 " +
           std::to_string(sweep) + " " + fmt(q.x) + " " + fmt(q.y);
}

}  // namespace detail

/// Deterministic SVG document for a crossing-free system: unit circle, one
/// path per leaf in canonical order, highlights on top. Byte-identical output
/// for identical inputs.
inline std::string render_svg(const LeafSystem& L, const RenderSpec& spec) {
    if (spec.size < 64) throw std::invalid_argument("render_svg: size must be >= 64");
    for (const auto& h : spec.highlight)
        if (!L.has_chord(h))
            throw std::invalid_argument("render_svg: highlight chord " + h.str() +
                                        " is not in the system");

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.size) +
           "\" height=\"" + std::to_string(spec.size) +
           "\" viewBox=\"-1.100000 -1.100000 2.200000 2.200000\">\n";
    svg += "<rect x=\"-1.100000\" y=\"-1.100000\" width=\"2.200000\" height=\"2.200000\" "
           "fill=\"white\"/>\n";
    svg += "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"black\" "
           "stroke-width=\"0.004\"/>\n";

    for (const auto& c : L.closure) {
        if (spec.highlight.count(c)) continue;
        svg += "<path d=\"" + detail::leaf_path(c, spec.geodesic_style) +
               "\" fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"0.003\"/>\n";
    }
    for (const auto& c : spec.highlight) {
        svg += "<path d=\"" + detail::leaf_path(c, spec.geodesic_style) +
               "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"0.006\"/>\n";
    }
    if (spec.labels) {
        for (const auto& v : L.vertex_set()) {
            auto p = detail::circle_point(v);
            svg += "<text x=\"" + detail::fmt(p.x * 1.04) + "\" y=\"" +
                   detail::fmt(p.y * 1.04) +
                   "\" font-size=\"0.04\" font-family=\"monospace\" fill=\"#333333\" "
                   "text-anchor=\"middle\">" +
                   v.str() + "</text>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace cubilam
