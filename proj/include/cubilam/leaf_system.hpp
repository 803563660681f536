#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cubilam/angle.hpp"
#include "cubilam/chord.hpp"

namespace cubilam {

/// Finite truncation of an invariant lamination: generator classes plus the
/// chords accumulated by pullback. All values are immutable in spirit;
/// pullback returns an enlarged copy.
struct LeafSystem {
    int degree = 2;
    unsigned depth = 0;
    std::vector<ClassPolygon> polygons;  // generator classes and pulled-back classes
    std::set<Chord> closure;             // every non-degenerate edge present

    LeafSystem() = default;
    LeafSystem(int d, std::vector<ClassPolygon> gens) : degree(d) {
        require_degree(d);
        for (auto& g : gens) add_polygon(g);
    }

    void add_polygon(const ClassPolygon& p) {
        if (std::find(polygons.begin(), polygons.end(), p) == polygons.end())
            polygons.push_back(p);
        for (const auto& e : p.edges())
            if (!e.degenerate()) closure.insert(e);
    }

    void add_chord(const Chord& c) {
        if (c.degenerate()) return;
        closure.insert(c);
        add_polygon(ClassPolygon({c.a, c.b}));
    }

    bool has_chord(const Chord& c) const { return closure.count(c) > 0; }

    /// All distinct endpoint angles.
    std::vector<Angle> vertex_set() const {
        std::vector<Angle> vs;
        for (const auto& c : closure) {
            vs.push_back(c.a);
            vs.push_back(c.b);
        }
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        return vs;
    }

    /// True iff c crosses some chord of the closure transversally.
    bool crosses_closure(const Chord& c) const {
        if (c.degenerate()) return false;
        for (const auto& e : closure)
            if (chords_cross(c, e)) return true;
        return false;
    }

    std::optional<std::pair<Chord, Chord>> first_crossing() const {
        std::vector<Chord> cs(closure.begin(), closure.end());
        for (std::size_t i = 0; i < cs.size(); ++i)
            for (std::size_t j = i + 1; j < cs.size(); ++j)
                if (chords_cross(cs[i], cs[j])) return std::make_pair(cs[i], cs[j]);
        return std::nullopt;
    }
};

// ---------------------------------------------------------------------------
// Invariance checks
// ---------------------------------------------------------------------------

struct InvarianceReport {
    bool ok = true;
    std::string detail;
    std::optional<ClassPolygon> violating_class;
    std::optional<Chord> violating_chord;
};

/// Forward invariance at truncation: the image vertex set of every class is a
/// point or sits inside some class, and every closure chord maps to a closure
/// chord or collapses.
inline InvarianceReport check_forward_invariant(const LeafSystem& L) {
    InvarianceReport rep;
    for (const auto& p : L.polygons) {
        auto img = p.image_vertices(L.degree);
        if (img.size() == 1) continue;  // collapses to a degenerate leaf
        bool found = false;
        for (const auto& q : L.polygons) {
            if (std::includes(q.vertices.begin(), q.vertices.end(), img.begin(), img.end())) {
                found = true;
                break;
            }
        }
        if (!found) {
            rep.ok = false;
            rep.violating_class = p;
            rep.detail = "image of class " + p.str() + " is not contained in any class";
            return rep;
        }
    }
    for (const auto& c : L.closure) {
        Chord img = c.image(L.degree);
        if (img.degenerate()) continue;
        if (!L.has_chord(img)) {
            rep.ok = false;
            rep.violating_chord = c;
            rep.detail = "image " + img.str() + " of leaf " + c.str() + " is absent";
            return rep;
        }
    }
    return rep;
}

struct CoveringReport {
    bool ok = true;
    unsigned long winding = 1;  // for a point image: the collapse multiplicity
    bool collapsed = false;
    std::string detail;
};

/// Checks that sigma_d restricted to the class extends to an orientation
/// preserving covering of the circle with the class as full preimage of its
/// image. A point image passes as a collapse of multiplicity m. A
/// non-degenerate image requires the vertex images to be distinct and to
/// traverse the image class once in cyclic order.
inline CoveringReport check_class_covering(const ClassPolygon& gamma, int d) {
    CoveringReport rep;
    std::vector<Angle> w;
    w.reserve(gamma.size());
    for (const auto& v : gamma.vertices) w.push_back(sigma(d, v));

    std::vector<Angle> distinct = w;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    if (distinct.size() == 1) {
        rep.collapsed = true;
        rep.winding = gamma.size();
        return rep;
    }
    if (distinct.size() != gamma.size()) {
        rep.ok = false;
        rep.detail = "vertex images double up; not a covering onto a " +
                     std::to_string(gamma.size()) + "-class";
        return rep;
    }
    Rational total(0);
    for (std::size_t i = 0; i < w.size(); ++i)
        total += arc_length(w[i], w[(i + 1) % w.size()]);
    if (total.get_den() != 1) {
        rep.ok = false;
        rep.detail = "image winding is not integral";
        return rep;
    }
    unsigned long k = total.get_num().get_ui();
    if (k != 1) {
        rep.ok = false;
        rep.detail = "images are not cyclically monotone (winding " + std::to_string(k) + ")";
        return rep;
    }
    rep.winding = 1;
    return rep;
}

// ---------------------------------------------------------------------------
// Sibling preimage selection
// ---------------------------------------------------------------------------

namespace detail {

inline bool set_internally_noncrossing(const std::vector<Chord>& cs) {
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t j = i + 1; j < cs.size(); ++j)
            if (chords_cross(cs[i], cs[j])) return false;
    return true;
}

/// All perfect matchings between the two preimage fibers that are internally
/// non-crossing. d <= 3 keeps this a toy enumeration.
inline std::vector<std::vector<Chord>> chord_sibling_candidates(int d, const Chord& c) {
    auto fa = sigma_preimages(d, c.a);
    auto fb = sigma_preimages(d, c.b);
    std::vector<int> perm(fa.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    std::vector<std::vector<Chord>> out;
    do {
        std::vector<Chord> match;
        match.reserve(fa.size());
        for (std::size_t i = 0; i < fa.size(); ++i)
            match.emplace_back(fa[i], fb[perm[i]]);
        if (set_internally_noncrossing(match)) {
            std::sort(match.begin(), match.end());
            out.push_back(std::move(match));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// The d cyclic-run partitions of the d*m preimage points into m-gons. For
/// m >= 3 these are the only assemblies that avoid internal crossings.
inline std::vector<std::vector<ClassPolygon>> polygon_sibling_candidates(
    int d, const ClassPolygon& p) {
    const std::size_t m = p.size();
    std::vector<Angle> pts;
    for (const auto& v : p.vertices)
        for (const auto& pre : sigma_preimages(d, v)) pts.push_back(pre);
    std::sort(pts.begin(), pts.end());

    std::vector<std::vector<ClassPolygon>> out;
    for (std::size_t cut = 0; cut < m; ++cut) {
        std::vector<ClassPolygon> polys;
        bool good = true;
        for (int run = 0; run < d && good; ++run) {
            std::vector<Angle> vs;
            for (std::size_t i = 0; i < m; ++i)
                vs.push_back(pts[(cut + run * m + i) % pts.size()]);
            ClassPolygon cand(vs);
            // each run must map onto the image class bijectively
            if (cand.image_vertices(d) != p.vertices) good = false;
            polys.push_back(std::move(cand));
        }
        if (!good) continue;
        std::vector<Chord> all;
        for (const auto& q : polys)
            for (const auto& e : q.edges()) all.push_back(e);
        if (!set_internally_noncrossing(all)) continue;
        std::sort(polys.begin(), polys.end());
        out.push_back(std::move(polys));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct CandidateCost {
    Rational new_length;
    std::vector<Chord> new_chords;  // sorted

    bool better_than(const CandidateCost& o) const {
        if (new_length != o.new_length) return new_length < o.new_length;
        return new_chords < o.new_chords;
    }
};

inline CandidateCost candidate_cost(const std::vector<Chord>& chords,
                                    const LeafSystem& L) {
    CandidateCost cc;
    cc.new_length = 0;
    for (const auto& c : chords) {
        if (c.degenerate() || L.has_chord(c)) continue;
        cc.new_length += c.shorter_arc();
        cc.new_chords.push_back(c);
    }
    std::sort(cc.new_chords.begin(), cc.new_chords.end());
    return cc;
}

}  // namespace detail

/// Enlarges L by sigma_d-preimage classes of existing classes down to the
/// requested absolute depth. At each class the unique compatible non-crossing
/// sibling system is chosen; when several exist, the one minimizing total arc
/// length of new leaves wins, ties broken lexicographically.
///
/// Throws std::runtime_error if some class admits no sibling system compatible
/// with the current closure (the input is not extendable).
inline LeafSystem pullback(const LeafSystem& L, unsigned depth) {
    LeafSystem out = L;
    while (out.depth < depth) {
        std::vector<ClassPolygon> frontier = out.polygons;
        std::sort(frontier.begin(), frontier.end());
        for (const auto& p : frontier) {
            std::vector<std::vector<ClassPolygon>> candidates;
            if (p.is_leaf()) {
                for (auto& match : detail::chord_sibling_candidates(out.degree,
                                                                    Chord(p.vertices[0], p.vertices[1]))) {
                    std::vector<ClassPolygon> polys;
                    for (const auto& c : match) polys.push_back(ClassPolygon({c.a, c.b}));
                    candidates.push_back(std::move(polys));
                }
            } else {
                candidates = detail::polygon_sibling_candidates(out.degree, p);
            }

            bool chosen = false;
            std::vector<ClassPolygon> best;
            detail::CandidateCost best_cost;
            for (const auto& cand : candidates) {
                std::vector<Chord> all_edges;
                for (const auto& q : cand)
                    for (const auto& e : q.edges())
                        if (!e.degenerate()) all_edges.push_back(e);
                bool compatible = true;
                for (const auto& e : all_edges) {
                    if (out.crosses_closure(e)) {
                        compatible = false;
                        break;
                    }
                }
                if (!compatible) continue;
                auto cost = detail::candidate_cost(all_edges, out);
                if (!chosen || cost.better_than(best_cost)) {
                    chosen = true;
                    best = cand;
                    best_cost = cost;
                }
            }
            if (!chosen)
                throw std::runtime_error(
                    "pullback: no non-crossing sibling choice exists for class " + p.str());
            for (const auto& q : best) out.add_polygon(q);
        }
        ++out.depth;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Edge dichotomy
// ---------------------------------------------------------------------------

struct EdgeFate {
    Chord edge;
    bool precritical = false;   // some iterate collapses to a point
    bool preperiodic = false;   // chord orbit enters a cycle
    unsigned long steps = 0;    // collapse step, or preperiod
    unsigned long period = 0;   // cycle length when preperiodic
};

struct DichotomyReport {
    bool ok = true;
    std::string detail;
    std::vector<EdgeFate> fates;
    bool all_periodic_or_precritical() const { return ok; }
};

/// Every edge of a forward-invariant finite system is (pre)critical or
/// (pre)periodic; with rational angles this is decided by direct iteration.
inline DichotomyReport leaf_dichotomy_check(const LeafSystem& L) {
    DichotomyReport rep;
    auto inv = check_forward_invariant(L);
    if (!inv.ok) {
        rep.ok = false;
        rep.detail = "precondition: system is not forward invariant (" + inv.detail + ")";
        return rep;
    }
    for (const auto& c : L.closure) {
        EdgeFate fate;
        fate.edge = c;
        std::map<Chord, unsigned long> seen;
        Chord cur = c;
        unsigned long step = 0;
        for (;;) {
            if (cur.degenerate()) {
                fate.precritical = true;
                fate.steps = step;
                break;
            }
            auto it = seen.find(cur);
            if (it != seen.end()) {
                fate.preperiodic = true;
                fate.steps = it->second;
                fate.period = step - it->second;
                break;
            }
            seen.emplace(cur, step);
            cur = cur.image(L.degree);
            ++step;
        }
        rep.fates.push_back(fate);
    }
    return rep;
}

/// Chord-orbit period: least n >= 1 with sigma^n(c) = c, or 0 when the chord
/// is not periodic (collapses or is strictly preperiodic).
inline unsigned long chord_period(int d, const Chord& c) {
    if (c.degenerate()) return 0;
    Chord cur = c;
    std::set<Chord> seen;
    unsigned long step = 0;
    for (;;) {
        cur = cur.image(d);
        ++step;
        if (cur.degenerate()) return 0;
        if (cur == c) return step;
        if (!seen.insert(cur).second) return 0;
    }
}

}  // namespace cubilam
