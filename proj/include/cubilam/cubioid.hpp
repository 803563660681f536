#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubilam/gaps.hpp"
#include "cubilam/leaf_system.hpp"
#include "cubilam/quad_gap.hpp"

namespace cubilam {

struct CubioidReport {
    enum class Verdict { cubioidal, not_cubioidal, undetermined };
    Verdict verdict = Verdict::undetermined;
    std::vector<RotationalSet> rotational_sets_found;
    std::optional<Chord> violating_leaf;
    std::string reason;

    bool cubioidal() const { return verdict == Verdict::cubioidal; }
};

namespace detail {

/// The two gaps bordering a chord of the system.
inline std::vector<const Gap*> gaps_adjacent_to(const std::vector<Gap>& gaps,
                                                const Chord& c) {
    std::vector<const Gap*> out;
    for (const auto& g : gaps)
        for (const auto& e : g.boundary_edges)
            if (e == c) {
                out.push_back(&g);
                break;
            }
    return out;
}

}  // namespace detail

/// The cubioidal predicate on a degree-3 truncation: at most one rotational
/// set, and every periodic non-degenerate leaf has a periodic Fatou gap
/// attached on some side. Gap periodicity that the truncation cannot certify
/// yields an undetermined verdict rather than a guess.
inline CubioidReport is_cubioidal(const LeafSystem& L) {
    if (L.degree != 3)
        throw std::invalid_argument("is_cubioidal: expects a degree-3 lamination");

    CubioidReport rep;
    rep.rotational_sets_found = rotational_sets(L);
    if (rep.rotational_sets_found.size() >= 2) {
        rep.verdict = CubioidReport::Verdict::not_cubioidal;
        rep.reason = "found " + std::to_string(rep.rotational_sets_found.size()) +
                     " rotational sets";
        return rep;
    }

    auto gaps = classified_gaps(L);
    bool any_undetermined = false;
    for (const auto& c : L.closure) {
        if (chord_period(L.degree, c) == 0) continue;  // not a periodic leaf
        bool attached = false;
        bool side_undetermined = false;
        for (const Gap* g : detail::gaps_adjacent_to(gaps, c)) {
            if (g->undetermined) {
                side_undetermined = true;
                continue;
            }
            if (g->kind == Gap::Kind::fatou && g->period.has_value()) attached = true;
        }
        if (attached) continue;
        if (side_undetermined) {
            any_undetermined = true;
            continue;
        }
        rep.verdict = CubioidReport::Verdict::not_cubioidal;
        rep.violating_leaf = c;
        rep.reason = "periodic leaf " + c.str() + " has no attached periodic Fatou gap";
        return rep;
    }
    if (any_undetermined) {
        rep.verdict = CubioidReport::Verdict::undetermined;
        rep.reason = "gap periodicity undetermined at current depth";
        return rep;
    }
    rep.verdict = CubioidReport::Verdict::cubioidal;
    return rep;
}

/// Structural membership test for the quadratic model family: empty, or a
/// single invariant rotational set with every periodic non-degenerate leaf
/// among its edges.
inline bool quadratic_cardioid_member(const LeafSystem& L2,
                                      std::string* why = nullptr) {
    if (L2.degree != 2)
        throw std::invalid_argument("quadratic_cardioid_member: expects degree 2");
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };

    if (L2.closure.empty()) return true;

    auto rots = rotational_sets(L2);
    if (rots.size() != 1)
        return fail("expected exactly one rotational set, found " +
                    std::to_string(rots.size()));
    const auto& rs = rots[0];
    // invariance of the rotational set
    {
        std::vector<Angle> img;
        for (const auto& v : rs.vertices) img.push_back(sigma(2, v));
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
        if (img != rs.vertices) return fail("rotational set is not invariant");
    }

    // every periodic non-degenerate leaf must be an edge of the rotational set
    for (const auto& c : L2.closure) {
        if (chord_period(2, c) == 0) continue;
        bool a_in = std::binary_search(rs.vertices.begin(), rs.vertices.end(), c.a);
        bool b_in = std::binary_search(rs.vertices.begin(), rs.vertices.end(), c.b);
        if (!a_in || !b_in)
            return fail("periodic leaf " + c.str() + " is not an edge of the rotational set");
    }
    return true;
}

struct ClassificationReport {
    enum class Case { tunes, coexists, neither, undetermined };
    Case result = Case::undetermined;
    LeafSystem induced_quadratic;
    bool cardioid_member = false;
    std::optional<std::pair<Chord, Chord>> crossing_witness;  // (leaf of L, gap edge)
    std::string detail;

    int exit_code() const {
        switch (result) {
            case Case::tunes:
            case Case::coexists: return 0;
            case Case::neither: return 2;
            default: return 3;
        }
    }
};

namespace detail {

/// Classes of L whose vertices all live on the gap (full orbits avoid the
/// hole), transported through the collapse map. Gap and vassal edges collapse
/// to points and are skipped up front, so the collapse map is only built when
/// interior classes actually need transporting.
inline LeafSystem transport_through_gap(const LeafSystem& L, const QuadraticGapApprox& U) {
    const Major& M = U.major;
    std::set<Chord> collapsing = U.edges;
    if (!M.critical()) {
        auto V = build_vassal(M);
        for (const auto& e : V.edges) collapsing.insert(e);
    }
    auto on_gap = [&](const ClassPolygon& p) {
        for (const auto& v : p.vertices)
            for (const auto& x : orbit_info(3, v).orbit)
                if (M.in_hole(x)) return false;
        return true;
    };
    // a chord collapses under the gap boundary map iff some iterate reaches
    // the major or degenerates; detectable without the collapse map itself
    auto chord_collapses = [&](const Chord& c) {
        Chord cur = c;
        std::set<Chord> seen;
        for (;;) {
            if (cur.degenerate() || cur == M.leaf) return true;
            if (!seen.insert(cur).second) return false;
            cur = cur.image(3);
        }
    };

    std::vector<const ClassPolygon*> pending;
    for (const auto& p : L.polygons) {
        if (p.is_leaf()) {
            Chord c(p.vertices[0], p.vertices[1]);
            if (collapsing.count(c) || chord_collapses(c)) continue;
        }
        if (on_gap(p)) pending.push_back(&p);
    }

    LeafSystem out;
    out.degree = 2;
    if (pending.empty()) return out;

    CollapseMap cm = build_collapse_map(M);
    for (const ClassPolygon* p : pending) {
        std::vector<Angle> img;
        for (const auto& v : p->vertices) img.push_back(psi_u(cm, v));
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
        if (img.size() < 2) continue;  // collapsed class
        out.add_polygon(ClassPolygon(img));
    }
    return out;
}

}  // namespace detail

/// The tuning/coexistence classifier against a stand-alone invariant gap:
/// case `tunes` when every gap (and vassal) edge is a leaf of L, case
/// `coexists` when no leaf of L crosses a gap edge while the gap edges are not
/// all present and the major is regular-critical; `neither` otherwise, with a
/// crossing witness when one exists.
inline ClassificationReport classify_tuning(const LeafSystem& L,
                                            const QuadraticGapApprox& U) {
    ClassificationReport rep;
    if (L.degree != 3)
        throw std::invalid_argument("classify_tuning: expects a degree-3 lamination");
    if (L.depth < U.depth) {
        rep.result = ClassificationReport::Case::undetermined;
        rep.detail = "depth mismatch: lamination depth " + std::to_string(L.depth) +
                     " < gap depth " + std::to_string(U.depth);
        return rep;
    }

    // transversal crossing disqualifies both cases
    for (const auto& c : L.closure) {
        for (const auto& e : U.edges) {
            if (chords_cross(c, e)) {
                rep.result = ClassificationReport::Case::neither;
                rep.crossing_witness = std::make_pair(c, e);
                rep.detail = "leaf " + c.str() + " crosses gap edge " + e.str();
                return rep;
            }
        }
    }

    bool edges_present = true;
    for (const auto& e : U.edges)
        if (!L.has_chord(e)) edges_present = false;
    if (edges_present && !U.major.critical()) {
        auto V = build_vassal(U.major);
        for (const auto& e : V.edges)
            if (!L.has_chord(e)) edges_present = false;
    }

    if (edges_present) {
        rep.result = ClassificationReport::Case::tunes;
        rep.induced_quadratic = detail::transport_through_gap(L, U);
        rep.cardioid_member = quadratic_cardioid_member(rep.induced_quadratic);
        return rep;
    }
    if (U.major.critical()) {
        rep.result = ClassificationReport::Case::coexists;
        rep.induced_quadratic = detail::transport_through_gap(L, U);
        rep.cardioid_member = quadratic_cardioid_member(rep.induced_quadratic);
        rep.detail = "gap edges are not all leaves; no leaf crosses them";
        return rep;
    }
    rep.result = ClassificationReport::Case::neither;
    rep.detail = "periodic-type gap edges are not all leaves of the lamination";
    return rep;
}

}  // namespace cubilam
