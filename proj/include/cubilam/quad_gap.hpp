#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cubilam/angle.hpp"
#include "cubilam/chord.hpp"
#include "cubilam/leaf_system.hpp"

namespace cubilam {

/// A candidate major leaf of a degree-2 invariant gap under angle tripling,
/// together with its hole: the complementary arc of length in [1/3, 1/2]
/// carrying no gap vertices.
struct Major {
    enum class Type { regular_critical, periodic };

    Chord leaf;
    Type type = Type::regular_critical;
    Angle hole_from, hole_to;  // oriented open arc (hole_from, hole_to)
    Rational hole_length;
    unsigned long period = 0;  // leaf period (periodic type)

    bool critical() const { return type == Type::regular_critical; }
    bool in_hole(const Angle& t) const { return in_open_arc(t, hole_from, hole_to); }
    bool in_closed_hole(const Angle& t) const {
        return t == hole_from || t == hole_to || in_hole(t);
    }
};

struct MajorResult {
    bool ok = false;
    Major major;
    std::string reason;
};

/// Determines whether M can serve as a major: a critical leaf whose critical
/// value orbit avoids the hole, or a periodic leaf whose hole has length in
/// [1/3, 1/2] and whose iterated images never sit inside the closed hole.
/// For diameters both holes measure exactly 1/2; the positively oriented arc
/// (a, b) is the default and `hole_flip` selects the other one.
inline MajorResult validate_major(const Chord& m, bool hole_flip = false) {
    MajorResult res;
    if (m.degenerate()) {
        res.reason = "degenerate leaf";
        return res;
    }
    Rational ab = arc_length(m.a, m.b);
    Rational ba = 1 - ab;
    const Rational third(1, 3), half(1, 2);

    bool critical = sigma(3, m.a) == sigma(3, m.b);
    if (critical) {
        Major maj;
        maj.leaf = m;
        maj.type = Major::Type::regular_critical;
        // the hole is the side of length exactly 1/3
        if (ab == third) {
            maj.hole_from = m.a;
            maj.hole_to = m.b;
        } else {
            maj.hole_from = m.b;
            maj.hole_to = m.a;
        }
        maj.hole_length = third;
        // the critical value must stay clear of the hole
        for (const auto& t : orbit_info(3, sigma(3, m.a)).orbit) {
            if (maj.in_hole(t)) {
                res.reason = "critical value orbit enters the hole at " + t.str();
                return res;
            }
        }
        res.ok = true;
        res.major = maj;
        return res;
    }

    unsigned long k = chord_period(3, m);
    if (k == 0) {
        res.reason = "leaf is neither critical nor periodic";
        return res;
    }

    Major maj;
    maj.leaf = m;
    maj.type = Major::Type::periodic;
    maj.period = k;
    if (ab == half) {
        // diameter: both sides qualify, pick by flag
        if (!hole_flip) {
            maj.hole_from = m.a;
            maj.hole_to = m.b;
        } else {
            maj.hole_from = m.b;
            maj.hole_to = m.a;
        }
        maj.hole_length = half;
    } else if (ab >= third && ab <= half) {
        maj.hole_from = m.a;
        maj.hole_to = m.b;
        maj.hole_length = ab;
    } else if (ba >= third && ba <= half) {
        maj.hole_from = m.b;
        maj.hole_to = m.a;
        maj.hole_length = ba;
    } else {
        res.reason = "both holes have length " + ab.get_str() + " and " + ba.get_str() +
                     ", outside [1/3, 1/2]";
        return res;
    }

    // the iterated images of the leaf must not sit inside the closed hole
    Chord cur = m;
    for (unsigned long n = 1; n < k; ++n) {
        cur = cur.image(3);
        if (maj.in_closed_hole(cur.a) && maj.in_closed_hole(cur.b)) {
            res.reason = "image " + cur.str() + " enters the hole";
            return res;
        }
    }
    res.ok = true;
    res.major = maj;
    return res;
}

/// Truncated edge system of the invariant gap U_M: the major's leaf orbit and
/// its iterated sibling preimages that stay outside the open hole.
struct QuadraticGapApprox {
    Major major;
    unsigned depth = 0;
    std::set<Chord> edges;
    std::vector<std::vector<Chord>> level_edges;  // new edges per pullback level

    bool has_edge(const Chord& c) const { return edges.count(c) > 0; }
    std::vector<Angle> vertex_set() const {
        std::vector<Angle> vs;
        for (const auto& c : edges) {
            vs.push_back(c.a);
            vs.push_back(c.b);
        }
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        return vs;
    }
};

namespace detail {

inline bool crosses_any(const Chord& c, const std::set<Chord>& system) {
    for (const auto& e : system)
        if (chords_cross(c, e)) return true;
    return false;
}

}  // namespace detail

/// Builds the gap edge system to the given pullback depth. Level 0 holds the
/// leaf orbit; each level pulls the frontier back through the best sibling
/// matching and keeps the chords with both endpoints outside the open hole.
inline QuadraticGapApprox build_quadratic_gap(const Major& M, unsigned depth) {
    QuadraticGapApprox U;
    U.major = M;
    U.depth = depth;

    auto outside_hole = [&](const Chord& c) {
        return !M.in_hole(c.a) && !M.in_hole(c.b);
    };

    std::vector<Chord> orbit{M.leaf};
    {
        Chord cur = M.leaf;
        for (;;) {
            cur = cur.image(3);
            if (cur.degenerate() || cur == M.leaf) break;
            orbit.push_back(cur);
        }
    }

    // the leaf orbit in forward order; for a genuine major these are pairwise
    // disjoint gap edges, degenerate majors get a maximal non-crossing subset
    std::vector<Chord> level0;
    for (const auto& c : orbit) {
        if (!outside_hole(c)) continue;
        if (detail::crosses_any(c, U.edges)) continue;
        if (U.edges.insert(c).second) level0.push_back(c);
    }
    U.level_edges.push_back(level0);

    std::vector<Chord> frontier = orbit;
    for (unsigned lvl = 1; lvl <= depth; ++lvl) {
        std::vector<Chord> next;
        std::sort(frontier.begin(), frontier.end());
        for (const auto& c : frontier) {
            auto candidates = detail::chord_sibling_candidates(3, c);
            bool chosen = false;
            std::vector<Chord> best;
            Rational best_len;
            std::vector<Chord> best_new;
            for (const auto& cand : candidates) {
                bool compatible = true;
                for (const auto& e : cand) {
                    if (detail::crosses_any(e, U.edges)) {
                        compatible = false;
                        break;
                    }
                }
                if (!compatible) continue;
                Rational len(0);
                std::vector<Chord> fresh;
                for (const auto& e : cand) {
                    if (U.edges.count(e)) continue;
                    len += e.shorter_arc();
                    fresh.push_back(e);
                }
                std::sort(fresh.begin(), fresh.end());
                if (!chosen || len < best_len || (len == best_len && fresh < best_new)) {
                    chosen = true;
                    best = cand;
                    best_len = len;
                    best_new = fresh;
                }
            }
            if (!chosen) continue;  // no compatible sibling system; skip this branch
            for (const auto& e : best) {
                if (!outside_hole(e)) continue;
                if (U.edges.insert(e).second) next.push_back(e);
            }
        }
        std::sort(next.begin(), next.end());
        U.level_edges.push_back(next);
        frontier = next;
    }
    return U;
}

/// The vassal gap of a periodic-type major: the quadratic gap wedged into the
/// hole, bounded by the major and its sibling leaf.
struct VassalGap {
    Chord major;
    Chord sibling;
    unsigned long period = 0;
    unsigned long return_degree = 0;
    std::vector<std::pair<Angle, Angle>> arcs;  // trapping arcs, one per orbit step
    std::vector<Angle> basis_sample;
    std::optional<Angle> trapped_fixed_angle;
    std::vector<Chord> edges;  // major, sibling, and deeper bridges in the hole
};

namespace detail {

/// The trapping arc for step i >= 1: the side of sigma^i(M) whose interior
/// avoids both endpoints of M; when both sides touch them (the leaf orbit
/// crosses M) fall back to the side holding the fixed angle of the hole.
inline std::pair<Angle, Angle> vassal_arc(const Major& M, const Chord& img) {
    auto interior_clear = [&](const Angle& lo, const Angle& hi) {
        return !in_open_arc(M.leaf.a, lo, hi) && !in_open_arc(M.leaf.b, lo, hi);
    };
    bool ab = interior_clear(img.a, img.b);
    bool ba = interior_clear(img.b, img.a);
    if (ab && !ba) return {img.a, img.b};
    if (ba && !ab) return {img.b, img.a};
    for (const Angle& fixed : {Angle(1, 2), Angle(0)}) {
        if (in_open_arc(fixed, M.hole_from, M.hole_to) || fixed == M.hole_from ||
            fixed == M.hole_to) {
            if (in_closed_arc(fixed, img.a, img.b)) return {img.a, img.b};
            return {img.b, img.a};
        }
    }
    return {img.a, img.b};
}

}  // namespace detail

/// Finds the sibling leaf inside the hole and assembles the vassal gap. The
/// return degree is the exact winding of the k-th iterate over the 4-vertex
/// boundary cycle and must come out 2.
inline VassalGap build_vassal(const Major& M) {
    if (M.critical())
        throw std::invalid_argument("build_vassal: major is regular-critical");

    VassalGap V;
    V.major = M.leaf;
    V.period = M.period;

    // sibling endpoints: the second preimage of each image endpoint inside the
    // closed hole
    Chord img = M.leaf.image(3);
    auto pick = [&](const Angle& target) {
        std::optional<Angle> found;
        for (const auto& p : sigma_preimages(3, target)) {
            if (p == M.leaf.a || p == M.leaf.b) continue;
            if (M.in_closed_hole(p)) {
                if (found)
                    throw std::runtime_error("build_vassal: sibling endpoint not unique");
                found = p;
            }
        }
        if (!found) throw std::runtime_error("build_vassal: no sibling endpoint in hole");
        return *found;
    };
    V.sibling = Chord(pick(img.a), pick(img.b));

    // trapping arcs along the leaf orbit
    V.arcs.emplace_back(M.hole_from, M.hole_to);
    Chord cur = M.leaf;
    for (unsigned long i = 1; i < M.period; ++i) {
        cur = cur.image(3);
        V.arcs.push_back(detail::vassal_arc(M, cur));
    }

    // boundary cycle of the truncated gap: hole endpoints and sibling endpoints
    Angle n_lo = V.sibling.a, n_hi = V.sibling.b;
    if (arc_length(M.hole_from, n_lo) > arc_length(M.hole_from, n_hi)) std::swap(n_lo, n_hi);
    std::vector<Angle> cycle{M.hole_from, n_lo, n_hi, M.hole_to};
    Rational total(0);
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        Angle u = sigma_iter(3, cycle[i], M.period);
        Angle v = sigma_iter(3, cycle[(i + 1) % cycle.size()], M.period);
        total += arc_length_or_zero(u, v);
    }
    if (total.get_den() != 1)
        throw std::runtime_error("build_vassal: return winding not integral");
    V.return_degree = total.get_num().get_ui();

    V.basis_sample = {M.leaf.a, M.leaf.b, V.sibling.a, V.sibling.b};
    std::sort(V.basis_sample.begin(), V.basis_sample.end());

    // the fixed angle trapped by the arc cycle, when there is one
    for (const Angle& fixed : {Angle(0), Angle(1, 2)}) {
        bool trapped = true;
        for (const auto& [lo, hi] : V.arcs)
            if (!in_closed_arc(fixed, lo, hi)) trapped = false;
        if (trapped) {
            V.trapped_fixed_angle = fixed;
            auto it = std::lower_bound(V.basis_sample.begin(), V.basis_sample.end(), fixed);
            if (it == V.basis_sample.end() || *it != fixed) V.basis_sample.insert(it, fixed);
            break;
        }
    }

    V.edges = {M.leaf, V.sibling};
    return V;
}

/// Deeper vassal edges: bridges over the arcs removed from the trapping arcs
/// while refining the trapped set; `sweeps` refinement rounds. Sub-arcs are
/// tracked as position intervals along each trapping arc, which keeps the
/// interval arithmetic on the universal cover exact.
inline std::vector<std::vector<Chord>> vassal_arc_bridges(const Major& M,
                                                          const VassalGap& V,
                                                          unsigned sweeps,
                                                          std::size_t interval_cap = 4096) {
    const unsigned long k = M.period;
    using Interval = std::pair<Rational, Rational>;  // positions along an arc
    std::vector<std::vector<Interval>> comp(k);
    std::vector<Rational> len(k);
    std::vector<Angle> base(k);
    for (unsigned long i = 0; i < k; ++i) {
        base[i] = V.arcs[i].first;
        len[i] = V.arcs[i].first == V.arcs[i].second
                     ? Rational(1)
                     : arc_length(V.arcs[i].first, V.arcs[i].second);
        comp[i] = {{Rational(0), len[i]}};
    }

    // interval counts stay small for genuine vassals (one folding arc per
    // cycle); the cap only bites on degenerate majors, where the bridges
    // gathered so far are best-effort anyway
    for (unsigned sweep = 0; sweep < sweeps; ++sweep) {
        std::vector<std::vector<Interval>> fresh(k);
        bool capped = false;
        for (unsigned long i = 0; i < k; ++i) {
            unsigned long j = (i + 1) % k;
            // position of sigma(base_i) along arc_j, in [0, 1)
            Angle img = sigma(3, base[i]);
            Rational s = img == base[j] ? Rational(0) : arc_length(base[j], img);
            const auto& targets = comp[j];
            std::vector<Interval> kept;
            for (const auto& [p, q] : comp[i]) {
                Rational lo = s + 3 * p, hi = s + 3 * q;  // cover coordinates
                for (int n = 0; n <= 4; ++n) {
                    // first target whose lift can reach lo
                    auto it = std::lower_bound(
                        targets.begin(), targets.end(), lo - n,
                        [](const Interval& iv, const Rational& v) { return iv.second < v; });
                    for (; it != targets.end() && it->first + n <= hi; ++it) {
                        Rational clo = Rational(it->first + n);
                        if (clo < lo) clo = lo;
                        Rational chi = Rational(it->second + n);
                        if (chi > hi) chi = hi;
                        if (clo > chi) continue;
                        kept.emplace_back((clo - s) / 3, (chi - s) / 3);
                    }
                }
            }
            std::sort(kept.begin(), kept.end());
            // merge touching intervals
            std::vector<Interval> merged;
            for (const auto& iv : kept) {
                if (!merged.empty() && iv.first <= merged.back().second)
                    merged.back().second = std::max(merged.back().second, iv.second);
                else
                    merged.push_back(iv);
            }
            if (merged.size() > interval_cap) capped = true;
            fresh[i] = std::move(merged);
        }
        if (capped || fresh == comp) break;
        comp = std::move(fresh);
    }

    std::vector<std::vector<Chord>> bridges(k);
    for (unsigned long i = 0; i < k; ++i) {
        for (std::size_t t = 0; t + 1 < comp[i].size(); ++t) {
            Angle u(base[i].value() + comp[i][t].second);
            Angle v(base[i].value() + comp[i][t + 1].first);
            Chord b(u, v);
            if (!b.degenerate()) bridges[i].push_back(b);
        }
    }
    return bridges;
}

// ---------------------------------------------------------------------------
// Collapse map
// ---------------------------------------------------------------------------

/// The edge-collapsing map of the gap boundary, semiconjugating the tripling
/// map on the gap vertices with doubling. Implemented as a binary itinerary:
/// the split objects are the gap's fixed angle phi (coding 0) and its second
/// survivor preimage (coding 1/2) -- the major itself in the critical case.
struct CollapseMap {
    Major major;
    Angle phi;        // fixed angle on the gap side, psi(phi) = 0
    Angle phi_second; // for periodic type: the other preimage of phi in the gap
    Angle a0_end;     // A0 is the closed positively-oriented arc [phi, a0_end]

    /// True iff the full forward orbit of t avoids the open hole.
    bool in_gap_basis(const Angle& t) const {
        for (const auto& x : orbit_info(3, t).orbit)
            if (major.in_hole(x)) return false;
        return true;
    }
};

inline CollapseMap build_collapse_map(const Major& M) {
    CollapseMap cm;
    cm.major = M;

    // fixed angle surviving on the gap side
    std::optional<Angle> phi;
    for (const Angle& f : {Angle(0), Angle(1, 2)}) {
        if (M.in_hole(f)) continue;
        if (f == M.leaf.a || f == M.leaf.b) continue;
        phi = f;
        break;
    }
    if (!phi) phi = Angle(0);  // the symmetric leaf 0-1/2: both fixed angles on it
    cm.phi = *phi;

    if (M.critical()) {
        // split at the major; A0 runs from phi to the hole's lower endpoint
        cm.phi_second = M.hole_from;
        cm.a0_end = M.hole_from;
        return cm;
    }
    std::optional<Angle> second;
    for (const auto& p : sigma_preimages(3, cm.phi)) {
        if (p == cm.phi) continue;
        if (M.in_hole(p)) continue;
        bool survives = true;
        for (const auto& x : orbit_info(3, p).orbit)
            if (M.in_hole(x)) survives = false;
        if (!survives) continue;
        if (second)
            throw std::runtime_error("collapse map: second preimage of the fixed angle not unique");
        second = p;
    }
    if (!second)
        throw std::runtime_error(
            "collapse map: no second preimage of the fixed angle survives; "
            "the major does not bound a quadratic gap");
    cm.phi_second = *second;
    cm.a0_end = *second;
    return cm;
}

/// Exact evaluation of the collapse map on a gap vertex: the binary angle
/// whose digits are the itinerary of t over the two-arc partition. Rejects
/// angles whose orbit enters the open hole.
inline Angle psi_u(const CollapseMap& cm, const Angle& t) {
    if (!cm.in_gap_basis(t))
        throw std::invalid_argument("psi_u: orbit of " + t.str() + " enters the hole");

    const Major& M = cm.major;
    auto hits_split_one = [&](const Angle& x) {
        if (M.critical()) return x == M.leaf.a || x == M.leaf.b;
        return x == cm.phi_second;
    };

    std::vector<int> bits;
    bool tail_zero = false;   // orbit pinned at phi or after the 1-split
    Angle cur = t;
    std::map<Angle, std::size_t> seen;
    std::size_t preperiod = 0, period = 0;
    for (;;) {
        if (cur == cm.phi) {
            tail_zero = true;
            break;
        }
        if (hits_split_one(cur)) {
            bits.push_back(1);
            tail_zero = true;
            break;
        }
        auto it = seen.find(cur);
        if (it != seen.end()) {
            preperiod = it->second;
            period = bits.size() - preperiod;
            break;
        }
        seen.emplace(cur, bits.size());
        bits.push_back(in_closed_arc(cur, cm.phi, cm.a0_end) ? 0 : 1);
        cur = sigma(3, cur);
    }

    if (tail_zero) {
        // finite binary expansion
        Rational val(0), w(1, 2);
        for (int b : bits) {
            if (b) val += w;
            w /= 2;
        }
        return Angle(val);
    }
    // eventually periodic expansion: prefix + repeating block
    Rational val(0), w(1, 2);
    for (std::size_t i = 0; i < preperiod; ++i) {
        if (bits[i]) val += w;
        w /= 2;
    }
    mpz_class num(0);
    for (std::size_t i = preperiod; i < bits.size(); ++i) num = num * 2 + bits[i];
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, period);
    den -= 1;
    // w = 2^-(preperiod+1); the block contributes 2^-preperiod * num / (2^period - 1)
    val += w * 2 * Rational(num, den);
    return Angle(val);
}

inline Angle psi_u(const Major& M, const Angle& t) {
    return psi_u(build_collapse_map(M), t);
}

// ---------------------------------------------------------------------------
// Canonical lamination
// ---------------------------------------------------------------------------

/// The canonical lamination of the gap: the gap edge system for critical type,
/// joined with the vassal gap's edge orbit for periodic type. Bridges whose
/// forward copies would cross the system (possible only for degenerate majors)
/// are dropped to keep the truncation crossing-free.
inline LeafSystem canonical_lamination(const Major& M, unsigned depth) {
    auto U = build_quadratic_gap(M, depth);
    LeafSystem L;
    L.degree = 3;
    L.depth = depth;
    for (const auto& e : U.edges) L.add_chord(e);

    if (!M.critical()) {
        auto V = build_vassal(M);
        auto try_add = [&](const Chord& c) {
            if (c.degenerate() || L.has_chord(c)) return;
            if (!L.crosses_closure(c)) L.add_chord(c);
        };
        try_add(V.major);
        try_add(V.sibling);
        auto bridges = vassal_arc_bridges(M, V, depth * static_cast<unsigned>(M.period) + 1,
                                          std::size_t(8) << depth);
        for (const auto& per_arc : bridges)
            for (const auto& b : per_arc) try_add(b);
    }
    return L;
}

}  // namespace cubilam
