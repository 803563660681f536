#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "cubilam/angle.hpp"

namespace cubilam {

/// Unordered pair of angles. Canonical form keeps the smaller angle first so
/// equality is structural. Degenerate chords (a == b) are representable but
/// excluded from crossing checks.
struct Chord {
    Angle a, b;

    Chord() = default;
    Chord(const Angle& x, const Angle& y) : a(x), b(y) {
        if (b < a) std::swap(a, b);
    }

    bool degenerate() const { return a == b; }

    bool has_endpoint(const Angle& t) const { return a == t || b == t; }
    bool shares_endpoint(const Chord& o) const {
        return has_endpoint(o.a) || has_endpoint(o.b);
    }

    /// Length of the shorter of the two arcs cut by the chord.
    Rational shorter_arc() const {
        if (degenerate()) return Rational(0);
        Rational l = arc_length(a, b);
        Rational m = 1 - l;
        return l < m ? l : m;
    }

    Chord image(int d) const { return Chord(sigma(d, a), sigma(d, b)); }

    bool operator==(const Chord& o) const { return a == o.a && b == o.b; }
    bool operator!=(const Chord& o) const { return !(*this == o); }
    bool operator<(const Chord& o) const {
        if (a != o.a) return a < o.a;
        return b < o.b;
    }

    std::string str() const { return a.str() + "-" + b.str(); }
};

/// Strict transversal crossing in the open disk. Chords sharing an endpoint
/// (or identical) do not cross.
inline bool chords_cross(const Chord& c1, const Chord& c2) {
    if (c1.degenerate() || c2.degenerate())
        throw std::invalid_argument("chords_cross: degenerate chord");
    if (c1.shares_endpoint(c2)) return false;
    bool a_in = in_open_arc(c2.a, c1.a, c1.b);
    bool b_in = in_open_arc(c2.b, c1.a, c1.b);
    return a_in != b_in;
}

/// Convex hull of a finite class: >= 2 distinct vertices in cyclic order.
/// Canonical storage is ascending angle order, which on the circle is a valid
/// cyclic order starting from the smallest vertex.
struct ClassPolygon {
    std::vector<Angle> vertices;

    ClassPolygon() = default;
    explicit ClassPolygon(std::vector<Angle> vs) : vertices(std::move(vs)) {
        std::sort(vertices.begin(), vertices.end());
        vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
        if (vertices.size() < 2)
            throw std::invalid_argument("ClassPolygon: needs >= 2 distinct vertices");
    }

    std::size_t size() const { return vertices.size(); }
    bool is_leaf() const { return vertices.size() == 2; }

    std::vector<Chord> edges() const {
        std::vector<Chord> out;
        if (vertices.size() == 2) {
            out.emplace_back(vertices[0], vertices[1]);
            return out;
        }
        for (std::size_t i = 0; i < vertices.size(); ++i)
            out.emplace_back(vertices[i], vertices[(i + 1) % vertices.size()]);
        return out;
    }

    /// Vertex set image under sigma_d (deduplicated; may be smaller).
    std::vector<Angle> image_vertices(int d) const {
        std::vector<Angle> img;
        img.reserve(vertices.size());
        for (const auto& v : vertices) img.push_back(sigma(d, v));
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
        return img;
    }

    bool operator==(const ClassPolygon& o) const { return vertices == o.vertices; }
    bool operator<(const ClassPolygon& o) const { return vertices < o.vertices; }

    std::string str() const {
        std::string s = "{";
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            if (i) s += ",";
            s += vertices[i].str();
        }
        return s + "}";
    }
};

/// True iff chord c crosses any edge of the polygon transversally.
inline bool crosses_polygon(const Chord& c, const ClassPolygon& p) {
    for (const auto& e : p.edges())
        if (!e.degenerate() && chords_cross(c, e)) return true;
    return false;
}

}  // namespace cubilam
