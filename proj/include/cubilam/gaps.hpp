#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cubilam/angle.hpp"
#include "cubilam/chord.hpp"
#include "cubilam/leaf_system.hpp"

namespace cubilam {

/// One complementary region of a crossing-free chord system.
struct Gap {
    std::vector<Chord> boundary_edges;                 // chords on the boundary
    std::vector<std::pair<Angle, Angle>> boundary_arcs;  // circle arcs, CCW
    std::vector<Angle> basis_sample;                   // boundary circle points
    bool whole_disk = false;

    enum class Kind { finite, fatou };
    Kind kind = Kind::fatou;

    // classification results (filled by classify_gap)
    std::optional<unsigned long> period;       // empty: aperiodic at depth / undetermined
    std::optional<unsigned long> return_degree;
    std::optional<Rational> rotation_number;
    bool siegel_flag = false;
    bool undetermined = false;
    std::string note;

    bool finite() const { return kind == Kind::finite; }
};

namespace detail {

struct HalfEdge {
    int from = -1, to = -1;   // vertex indices
    bool is_arc = false;
    bool arc_forward = false;  // CCW arc half-edge (bounds an inside face)
    int twin = -1;
    int next = -1;
    Rational dir;  // departure direction at `from`, in turns mod 1
};

inline Rational direction_mod1(Rational r) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    r -= Rational(fl);
    r.canonicalize();
    return r;
}

}  // namespace detail

/// All complementary regions of the (crossing-free, non-degenerate) chord
/// system. The regions partition the disk minus the chords.
inline std::vector<Gap> enumerate_gaps(const LeafSystem& L) {
    std::vector<Chord> chords(L.closure.begin(), L.closure.end());
    if (chords.empty()) {
        Gap g;
        g.whole_disk = true;
        g.kind = Gap::Kind::fatou;
        return {g};
    }

    std::vector<Angle> verts;
    for (const auto& c : chords) {
        verts.push_back(c.a);
        verts.push_back(c.b);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    const int n = static_cast<int>(verts.size());
    auto vindex = [&](const Angle& t) {
        return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), t) - verts.begin());
    };

    std::vector<detail::HalfEdge> hes;
    auto add_pair = [&](int u, int v, bool arc, const Rational& du, const Rational& dv) {
        detail::HalfEdge a, b;
        a.from = u; a.to = v; a.is_arc = arc; a.dir = du;
        b.from = v; b.to = u; b.is_arc = arc; b.dir = dv;
        a.arc_forward = arc;   // first of the pair is the CCW direction
        b.arc_forward = false;
        a.twin = static_cast<int>(hes.size()) + 1;
        b.twin = static_cast<int>(hes.size());
        hes.push_back(a);
        hes.push_back(b);
    };

    const Rational quarter(1, 4), three_quarter(3, 4);
    for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n;
        // arc from verts[i] to verts[j], CCW
        Rational du = detail::direction_mod1(verts[i].value() + quarter);
        Rational dv = detail::direction_mod1(verts[j].value() + three_quarter);
        add_pair(i, j, true, du, dv);
    }
    for (const auto& c : chords) {
        int u = vindex(c.a), v = vindex(c.b);
        // direction of the chord from x to y: (x + y')/2 + 1/4 with y' in (x, x+1)
        Rational ya = c.b.value();
        if (ya <= c.a.value()) ya += 1;
        Rational du = detail::direction_mod1((c.a.value() + ya) / 2 + quarter);
        Rational yb = c.a.value();
        if (yb <= c.b.value()) yb += 1;
        Rational dv = detail::direction_mod1((c.b.value() + yb) / 2 + quarter);
        add_pair(u, v, false, du, dv);
    }

    // rotation order of departures at each vertex
    std::vector<std::vector<int>> at(n);
    for (int h = 0; h < static_cast<int>(hes.size()); ++h) at[hes[h].from].push_back(h);
    for (auto& list : at)
        std::sort(list.begin(), list.end(),
                  [&](int x, int y) { return hes[x].dir < hes[y].dir; });

    // next(h) = rotational predecessor of twin(h) at head(h)
    for (int h = 0; h < static_cast<int>(hes.size()); ++h) {
        int tw = hes[h].twin;
        const auto& list = at[hes[h].to];
        auto it = std::find(list.begin(), list.end(), tw);
        int idx = static_cast<int>(it - list.begin());
        int prev = list[(idx + list.size() - 1) % list.size()];
        hes[h].next = prev;
    }

    std::vector<Gap> gaps;
    std::vector<bool> used(hes.size(), false);
    for (int h0 = 0; h0 < static_cast<int>(hes.size()); ++h0) {
        if (used[h0]) continue;
        std::vector<int> cycle;
        int h = h0;
        do {
            used[h] = true;
            cycle.push_back(h);
            h = hes[h].next;
        } while (h != h0);

        bool outer = false;
        for (int e : cycle)
            if (hes[e].is_arc && !hes[e].arc_forward) outer = true;
        if (outer) continue;

        Gap g;
        std::set<Chord> edge_set;
        std::set<Angle> vset;
        for (int e : cycle) {
            const auto& he = hes[e];
            vset.insert(verts[he.from]);
            vset.insert(verts[he.to]);
            if (he.is_arc)
                g.boundary_arcs.emplace_back(verts[he.from], verts[he.to]);
            else
                edge_set.insert(Chord(verts[he.from], verts[he.to]));
        }
        g.boundary_edges.assign(edge_set.begin(), edge_set.end());
        g.basis_sample.assign(vset.begin(), vset.end());
        std::sort(g.boundary_arcs.begin(), g.boundary_arcs.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        g.kind = g.boundary_arcs.empty() ? Gap::Kind::finite : Gap::Kind::fatou;
        gaps.push_back(std::move(g));
    }
    return gaps;
}

namespace detail {

/// Index of the gap whose boundary arc [p, q) contains t; -1 if t falls on a
/// chord-only part of the circle (i.e. t is a vertex that starts no arc).
inline int gap_with_germ(const std::vector<Gap>& gaps, const Angle& t) {
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (gaps[i].whole_disk) return static_cast<int>(i);
        for (const auto& [p, q] : gaps[i].boundary_arcs) {
            if (p == t) return static_cast<int>(i);
            if (in_open_arc(t, p, q)) return static_cast<int>(i);
        }
    }
    return -1;
}

/// Successor of a gap under the chord-extended sigma_d, when the truncation
/// determines one. Infinite gaps follow the image of their arc germs
/// (orientation preserving, so a germ at an arc start maps to a germ); finite
/// gaps follow their vertex set. Returns -1 when undetermined.
inline int gap_successor(const std::vector<Gap>& gaps, int idx, int d) {
    const Gap& g = gaps[idx];
    if (g.whole_disk) return idx;
    if (g.kind == Gap::Kind::finite) {
        std::vector<Angle> img;
        for (const auto& v : g.basis_sample) img.push_back(sigma(d, v));
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
        if (img.size() < 2) return -1;  // collapses
        for (std::size_t i = 0; i < gaps.size(); ++i) {
            if (gaps[i].kind != Gap::Kind::finite) continue;
            if (gaps[i].basis_sample == img) return static_cast<int>(i);
        }
        return -1;
    }
    int target = -1;
    for (const auto& [p, q] : g.boundary_arcs) {
        (void)q;
        int cand = gap_with_germ(gaps, sigma(d, p));
        if (cand < 0) return -1;
        if (target < 0) target = cand;
        else if (target != cand) return -1;  // image spreads over several gaps
    }
    return target;
}

}  // namespace detail

/// Fills period / return degree / rotation number / siegel flag for one gap.
/// Verdicts are computed only from the rational truncation data; when the
/// truncation cannot certify periodicity the gap is reported undetermined or
/// aperiodic-at-depth rather than guessed.
inline Gap classify_gap(const Gap& gap, const LeafSystem& L,
                        const std::vector<Gap>& all_gaps) {
    Gap g = gap;
    const int d = L.degree;

    if (g.whole_disk) {
        g.period = 1;
        g.return_degree = d;
        return g;
    }

    // locate g in all_gaps (arcs included: the two sides of a single chord
    // share vertices and edges)
    int self = -1;
    for (std::size_t i = 0; i < all_gaps.size(); ++i) {
        if (all_gaps[i].basis_sample == g.basis_sample &&
            all_gaps[i].boundary_edges == g.boundary_edges &&
            all_gaps[i].boundary_arcs == g.boundary_arcs) {
            self = static_cast<int>(i);
            break;
        }
    }
    if (self < 0) {
        g.undetermined = true;
        g.note = "gap not found in system";
        return g;
    }

    // follow successors; detect a return to self
    std::vector<int> chain{self};
    int cur = self;
    bool broke = false;
    for (std::size_t step = 0; step < all_gaps.size() + 1; ++step) {
        cur = detail::gap_successor(all_gaps, cur, d);
        if (cur < 0) {
            broke = true;
            break;
        }
        if (cur == self) break;
        if (std::find(chain.begin(), chain.end(), cur) != chain.end()) break;  // other cycle
        chain.push_back(cur);
    }

    if (broke) {
        g.undetermined = true;
        g.note = "undetermined at current depth";
        return g;
    }
    if (cur != self) {
        g.note = "aperiodic-at-depth";
        return g;
    }
    unsigned long n = chain.size();
    g.period = n;

    // return degree: walk consecutive boundary vertices once around; arcs are
    // stretched by d^n, chords jump by the image arc
    mpz_class dn;
    mpz_ui_pow_ui(dn.get_mpz_t(), static_cast<unsigned long>(d), n);
    std::set<std::pair<Angle, Angle>> arcs(g.boundary_arcs.begin(), g.boundary_arcs.end());
    Rational total(0);
    const auto& vs = g.basis_sample;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const Angle& u = vs[i];
        const Angle& v = vs[(i + 1) % vs.size()];
        if (vs.size() == 1) break;
        if (arcs.count({u, v})) {
            total += Rational(dn) * arc_length(u, v);
        } else {
            total += arc_length_or_zero(sigma_iter(d, u, n), sigma_iter(d, v, n));
        }
    }
    if (total.get_den() != 1 || total <= 0) {
        g.undetermined = true;
        g.note = "return winding not integral";
        return g;
    }
    g.return_degree = total.get_num().get_ui();

    if (g.kind == Gap::Kind::fatou && *g.return_degree == 1) {
        // a rotation has no fixed point: only flag siegel-type when the return
        // map moves every basis vertex
        bool fixes_vertex = false;
        for (const auto& v : g.basis_sample)
            if (sigma_iter(d, v, n) == v) fixes_vertex = true;
        g.siegel_flag = !fixes_vertex;
    }

    if (g.kind == Gap::Kind::finite && *g.return_degree == 1) {
        // rotation number of the return map on the vertex cycle
        std::vector<Angle> img;
        for (const auto& v : vs) img.push_back(sigma_iter(d, v, n));
        bool is_perm = true;
        for (const auto& w : img)
            if (!std::binary_search(vs.begin(), vs.end(), w)) is_perm = false;
        if (is_perm) {
            std::size_t m = vs.size();
            std::size_t shift = std::lower_bound(vs.begin(), vs.end(), img[0]) - vs.begin();
            bool ok = true;
            for (std::size_t i = 0; i < m; ++i)
                if (img[i] != vs[(i + shift) % m]) ok = false;
            if (ok) {
                Rational rho(static_cast<long>(shift), static_cast<long>(m));
                rho.canonicalize();
                g.rotation_number = rho;
            }
        }
    }
    return g;
}

/// Classifies every gap of the system.
inline std::vector<Gap> classified_gaps(const LeafSystem& L) {
    auto gaps = enumerate_gaps(L);
    std::vector<Gap> out;
    out.reserve(gaps.size());
    for (const auto& g : gaps) out.push_back(classify_gap(g, L, gaps));
    return out;
}

/// Rotation number of a periodic vertex set: the return map must shift the
/// cyclically ordered vertices by a fixed offset k; returns k/m reduced.
/// Throws when the set is not periodic or the return map is not a shift.
inline Rational rotation_number(const std::vector<Angle>& vertices, int d) {
    std::vector<Angle> vs = vertices;
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    if (vs.empty()) throw std::invalid_argument("rotation_number: empty set");

    // least n >= 1 with sigma^n(set) = set
    std::set<std::vector<Angle>> seen;
    std::vector<Angle> cur = vs;
    unsigned long n = 0;
    for (;;) {
        std::vector<Angle> next;
        for (const auto& v : cur) next.push_back(sigma(d, v));
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        ++n;
        if (next == vs) break;
        if (!seen.insert(next).second)
            throw std::invalid_argument("rotation_number: set is not periodic");
        cur = next;
    }

    std::size_t m = vs.size();
    std::vector<Angle> img;
    for (const auto& v : vs) img.push_back(sigma_iter(d, v, n));
    std::size_t shift = std::lower_bound(vs.begin(), vs.end(), img[0]) - vs.begin();
    for (std::size_t i = 0; i < m; ++i)
        if (img[i] != vs[(i + shift) % m])
            throw std::invalid_argument("rotation_number: return map is not a cyclic shift");
    Rational rho(static_cast<long>(shift), static_cast<long>(m));
    rho.canonicalize();
    return rho;
}

inline Rational rotation_number(const ClassPolygon& gamma, int d) {
    return rotation_number(gamma.vertices, d);
}

/// A rotational set found in a truncation: either a finite periodic class
/// with non-zero rotation number or a siegel-flagged gap.
struct RotationalSet {
    std::vector<Angle> vertices;  // class vertices, or gap basis sample
    bool is_gap = false;
    Rational rotation;
    unsigned long period = 1;
};

/// All rotational sets detectable at the current truncation: periodic classes
/// with non-zero rotation number plus siegel-flagged gaps.
inline std::vector<RotationalSet> rotational_sets(const LeafSystem& L) {
    std::vector<RotationalSet> out;
    std::set<std::vector<Angle>> found;

    for (const auto& p : L.polygons) {
        try {
            Rational rho = rotation_number(p, L.degree);
            if (rho == 0) continue;
            if (!found.insert(p.vertices).second) continue;
            RotationalSet rs;
            rs.vertices = p.vertices;
            rs.rotation = rho;
            // recompute the set period for the report
            std::vector<Angle> cur = p.vertices;
            unsigned long n = 0;
            do {
                std::vector<Angle> next;
                for (const auto& v : cur) next.push_back(sigma(L.degree, v));
                std::sort(next.begin(), next.end());
                next.erase(std::unique(next.begin(), next.end()), next.end());
                cur = next;
                ++n;
            } while (cur != p.vertices);
            rs.period = n;
            out.push_back(std::move(rs));
        } catch (const std::invalid_argument&) {
            // not periodic or not rotational: skip
        }
    }

    for (const auto& g : classified_gaps(L)) {
        if (!g.siegel_flag) continue;
        if (!found.insert(g.basis_sample).second) continue;
        RotationalSet rs;
        rs.vertices = g.basis_sample;
        rs.is_gap = true;
        rs.period = g.period.value_or(0);
        rs.rotation = Rational(0);  // unknown from rational data; flagged only
        out.push_back(std::move(rs));
    }
    return out;
}

}  // namespace cubilam
