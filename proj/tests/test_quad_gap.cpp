#include <catch2/catch.hpp>

#include "cubilam/quad_gap.hpp"

using namespace cubilam;

namespace {

// Independent oracle for the gap of the critical major 1/3-2/3: middle-third
// subdivision of [0,1/3] and [2/3,1]. Bridges of removed arcs, by level.
std::set<Chord> middle_thirds_oracle(unsigned depth) {
    std::set<Chord> edges{Chord(Angle(1, 3), Angle(2, 3))};
    std::vector<std::pair<Rational, Rational>> intervals{{Rational(0), Rational(1, 3)},
                                                         {Rational(2, 3), Rational(1)}};
    for (unsigned lvl = 1; lvl <= depth; ++lvl) {
        std::vector<std::pair<Rational, Rational>> next;
        for (const auto& [u, v] : intervals) {
            Rational a = (2 * u + v) / 3, b = (u + 2 * v) / 3;
            edges.insert(Chord(Angle(a), Angle(b)));
            next.emplace_back(u, a);
            next.emplace_back(b, v);
        }
        intervals = next;
    }
    return edges;
}

Major major_of(const Chord& c, bool flip = false) {
    auto res = validate_major(c, flip);
    REQUIRE(res.ok);
    return res.major;
}

}  // namespace

TEST_CASE("validate_major examples") {
    auto r1 = validate_major(Chord(Angle(1, 3), Angle(2, 3)));
    REQUIRE(r1.ok);
    CHECK(r1.major.critical());
    CHECK(r1.major.hole_from == Angle(1, 3));
    CHECK(r1.major.hole_to == Angle(2, 3));
    CHECK(r1.major.hole_length == Rational(1, 3));

    // periodic diameter 1/8-5/8: hole contains the fixed angle 1/2
    auto r2 = validate_major(Chord(Angle(1, 8), Angle(5, 8)));
    REQUIRE(r2.ok);
    CHECK_FALSE(r2.major.critical());
    CHECK(r2.major.period == 2);
    CHECK(r2.major.hole_from == Angle(1, 8));
    CHECK(r2.major.hole_to == Angle(5, 8));
    CHECK(r2.major.hole_length == Rational(1, 2));
    CHECK(r2.major.in_hole(Angle(1, 2)));

    // rejected: both holes measure 1/4 and 3/4
    auto r3 = validate_major(Chord(Angle(1, 8), Angle(3, 8)));
    CHECK_FALSE(r3.ok);
    CHECK(r3.reason.find("1/4") != std::string::npos);

    // rejected: aperiodic non-critical
    CHECK_FALSE(validate_major(Chord(Angle(1, 6), Angle(1, 3))).ok);

    // rejected: critical leaf whose critical value falls in the hole
    CHECK_FALSE(validate_major(Chord(Angle(1, 12), Angle(5, 12))).ok);

    // symmetric leaf 0-1/2: default hole is (0, 1/2), flag flips it
    auto r4 = validate_major(Chord(Angle(0), Angle(1, 2)));
    REQUIRE(r4.ok);
    CHECK(r4.major.hole_from == Angle(0));
    auto r5 = validate_major(Chord(Angle(0), Angle(1, 2)), true);
    REQUIRE(r5.ok);
    CHECK(r5.major.hole_from == Angle(1, 2));

    // genuine period-2 major with hole (1/4, 5/8)
    auto r6 = validate_major(Chord(Angle(1, 4), Angle(5, 8)));
    REQUIRE(r6.ok);
    CHECK(r6.major.period == 2);
    CHECK(r6.major.hole_length == Rational(3, 8));
}

TEST_CASE("cantor gap edges at depth 2 match the frozen set") {
    auto U = build_quadratic_gap(major_of(Chord(Angle(1, 3), Angle(2, 3))), 2);
    std::set<Chord> expected{
        Chord(Angle(1, 3), Angle(2, 3)),   Chord(Angle(1, 9), Angle(2, 9)),
        Chord(Angle(7, 9), Angle(8, 9)),   Chord(Angle(1, 27), Angle(2, 27)),
        Chord(Angle(7, 27), Angle(8, 27)), Chord(Angle(19, 27), Angle(20, 27)),
        Chord(Angle(25, 27), Angle(26, 27))};
    CHECK(U.edges == expected);
}

TEST_CASE("cantor gap edges match the middle-thirds oracle with 2^j growth") {
    auto M = major_of(Chord(Angle(1, 3), Angle(2, 3)));
    for (unsigned depth : {1u, 3u, 5u}) {
        auto U = build_quadratic_gap(M, depth);
        CHECK(U.edges == middle_thirds_oracle(depth));
        REQUIRE(U.level_edges.size() == depth + 1);
        for (unsigned j = 1; j <= depth; ++j)
            CHECK(U.level_edges[j].size() == (1u << j));
    }
}

TEST_CASE("gap edge properties: provenance and orbit avoidance") {
    auto M = major_of(Chord(Angle(1, 3), Angle(2, 3)));
    auto U = build_quadratic_gap(M, 4);
    for (const auto& e : U.edges) {
        // every edge maps onto the major in finitely many steps
        Chord cur = e;
        bool reached = cur == M.leaf;
        for (int i = 0; i < 10 && !reached; ++i) {
            cur = cur.image(3);
            if (cur == M.leaf) reached = true;
            if (cur.degenerate()) break;
        }
        CHECK(reached);
        // endpoints' full forward orbits avoid the open hole
        for (const auto& t : orbit_info(3, e.a).orbit) CHECK_FALSE(M.in_hole(t));
        for (const auto& t : orbit_info(3, e.b).orbit) CHECK_FALSE(M.in_hole(t));
    }
}

TEST_CASE("periodic gap at depth 0 and 1") {
    auto M = major_of(Chord(Angle(1, 8), Angle(5, 8)));
    auto U0 = build_quadratic_gap(M, 0);
    CHECK(U0.edges == std::set<Chord>{M.leaf});

    auto U1 = build_quadratic_gap(M, 1);
    CHECK(U1.has_edge(M.leaf));
    CHECK(U1.has_edge(Chord(Angle(19, 24), Angle(23, 24))));
}

TEST_CASE("genuine periodic gap keeps its leaf orbit as edges") {
    auto M = major_of(Chord(Angle(1, 4), Angle(5, 8)));
    auto U = build_quadratic_gap(M, 2);
    CHECK(U.has_edge(Chord(Angle(1, 4), Angle(5, 8))));
    CHECK(U.has_edge(Chord(Angle(3, 4), Angle(7, 8))));  // the image leaf
    CHECK(U.has_edge(Chord(Angle(1, 12), Angle(5, 24))));
    CHECK(U.has_edge(Chord(Angle(11, 12), Angle(23, 24))));
    for (const auto& e : U.edges) {
        CHECK_FALSE(M.in_hole(e.a));
        CHECK_FALSE(M.in_hole(e.b));
    }
}

TEST_CASE("build_vassal for the diameter 1/8-5/8") {
    auto M = major_of(Chord(Angle(1, 8), Angle(5, 8)));
    auto V = build_vassal(M);
    CHECK(V.sibling == Chord(Angle(7, 24), Angle(11, 24)));
    CHECK(V.period == 2);
    CHECK(V.return_degree == 2);
    REQUIRE(V.trapped_fixed_angle.has_value());
    CHECK(*V.trapped_fixed_angle == Angle(1, 2));
    CHECK(std::count(V.basis_sample.begin(), V.basis_sample.end(), Angle(1, 2)) == 1);
}

TEST_CASE("build_vassal rejects critical majors and handles 0-1/2") {
    CHECK_THROWS_AS(build_vassal(major_of(Chord(Angle(1, 3), Angle(2, 3)))),
                    std::invalid_argument);

    auto V = build_vassal(major_of(Chord(Angle(0), Angle(1, 2))));
    CHECK(V.sibling == Chord(Angle(1, 6), Angle(1, 3)));
    CHECK(V.period == 1);
    CHECK(V.return_degree == 2);
}

TEST_CASE("build_vassal for a genuine period-2 major") {
    auto V = build_vassal(major_of(Chord(Angle(1, 4), Angle(5, 8))));
    CHECK(V.sibling == Chord(Angle(7, 24), Angle(7, 12)));
    CHECK(V.period == 2);
    CHECK(V.return_degree == 2);
}

TEST_CASE("collapse map on the cantor gap") {
    auto M = major_of(Chord(Angle(1, 3), Angle(2, 3)));
    auto cm = build_collapse_map(M);

    CHECK(psi_u(cm, Angle(1, 4)) == Angle(1, 3));
    CHECK(psi_u(cm, Angle(1, 3)) == Angle(1, 2));
    CHECK(psi_u(cm, Angle(2, 3)) == Angle(1, 2));
    CHECK(psi_u(cm, Angle(0)) == Angle(0));
    CHECK(psi_u(cm, Angle(1, 9)) == Angle(1, 4));
    CHECK(psi_u(cm, Angle(2, 9)) == Angle(1, 4));
    CHECK(psi_u(cm, Angle(1, 10)) == Angle(1, 5));  // digits (0022) -> bits (0011)
    CHECK(psi_u(cm, Angle(1, 13)) == Angle(1, 7));  // digits (002) -> bits (001)

    CHECK_THROWS_AS(psi_u(cm, Angle(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(psi_u(cm, Angle(4, 9)), std::invalid_argument);
}

TEST_CASE("collapse map semiconjugates tripling with doubling on gap vertices") {
    auto M = major_of(Chord(Angle(1, 3), Angle(2, 3)));
    auto cm = build_collapse_map(M);
    auto U = build_quadratic_gap(M, 5);
    for (const auto& t : U.vertex_set())
        CHECK(psi_u(cm, sigma(3, t)) == sigma(2, psi_u(cm, t)));
    for (const auto& e : U.edges) CHECK(psi_u(cm, e.a) == psi_u(cm, e.b));
}

TEST_CASE("collapse map on a genuine periodic gap") {
    auto M = major_of(Chord(Angle(1, 4), Angle(5, 8)));
    auto cm = build_collapse_map(M);
    Angle mu = psi_u(cm, Angle(1, 4));
    CHECK(mu == psi_u(cm, Angle(5, 8)));
    CHECK(mu == Angle(1, 3));
    auto U = build_quadratic_gap(M, 4);
    for (const auto& t : U.vertex_set())
        CHECK(psi_u(cm, sigma(3, t)) == sigma(2, psi_u(cm, t)));
    for (const auto& e : U.edges) CHECK(psi_u(cm, e.a) == psi_u(cm, e.b));
}

TEST_CASE("canonical lamination of the cantor major") {
    auto M = major_of(Chord(Angle(1, 3), Angle(2, 3)));
    auto L = canonical_lamination(M, 2);
    CHECK(L.closure.size() == 7);
    CHECK(check_forward_invariant(L).ok);
    CHECK_FALSE(L.first_crossing().has_value());

    // depth 4 has 1 + 2 + 4 + 8 + 16 = 31 leaves
    CHECK(canonical_lamination(M, 4).closure.size() == 31);

    // depth 0: just the generator edge
    CHECK(canonical_lamination(M, 0).closure.size() == 1);
}

TEST_CASE("canonical cantor edges are all precritical") {
    auto M = major_of(Chord(Angle(1, 3), Angle(2, 3)));
    auto L = canonical_lamination(M, 3);
    auto rep = leaf_dichotomy_check(L);
    REQUIRE(rep.ok);
    for (const auto& f : rep.fates) CHECK(f.precritical);

    // the invariant doubling leaf is periodic, not precritical
    LeafSystem single(2, {ClassPolygon({Angle(1, 3), Angle(2, 3)})});
    auto rep2 = leaf_dichotomy_check(single);
    REQUIRE(rep2.ok);
    REQUIRE(rep2.fates.size() == 1);
    CHECK(rep2.fates[0].preperiodic);
    CHECK(rep2.fates[0].steps == 0);
    CHECK(rep2.fates[0].period == 1);
}

TEST_CASE("canonical lamination of periodic majors") {
    // the diameter 1/8-5/8: contains gap and vassal edges, crossing-free
    auto M1 = major_of(Chord(Angle(1, 8), Angle(5, 8)));
    auto L1 = canonical_lamination(M1, 1);
    CHECK(L1.has_chord(Chord(Angle(1, 8), Angle(5, 8))));
    CHECK(L1.has_chord(Chord(Angle(7, 24), Angle(11, 24))));
    CHECK(L1.has_chord(Chord(Angle(19, 24), Angle(23, 24))));
    CHECK_FALSE(L1.first_crossing().has_value());

    // a genuine periodic major yields a forward-invariant truncation
    auto M2 = major_of(Chord(Angle(1, 4), Angle(5, 8)));
    auto L2 = canonical_lamination(M2, 2);
    CHECK_FALSE(L2.first_crossing().has_value());
    CHECK(check_forward_invariant(L2).ok);

    auto M3 = major_of(Chord(Angle(0), Angle(1, 2)));
    auto L3 = canonical_lamination(M3, 2);
    CHECK_FALSE(L3.first_crossing().has_value());
    CHECK(check_forward_invariant(L3).ok);
}
