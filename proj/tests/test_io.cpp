#include <catch2/catch.hpp>

#include "cubilam/io.hpp"

using namespace cubilam;

TEST_CASE("lamination format round-trip") {
    std::string text =
        "degree 3\n"
        "poly 1/13 3/13 9/13\n"
        "leaf 0 1/2\n"
        "leaf 1/6 1/3\n";
    auto L = lamination_from_string(text);
    CHECK(L.degree == 3);
    CHECK(L.has_chord(Chord(Angle(0), Angle(1, 2))));
    CHECK(L.has_chord(Chord(Angle(1, 13), Angle(3, 13))));
    CHECK(lamination_to_string(L) == text);

    // canonical serialization is a fixed point of parse/serialize
    auto L2 = lamination_from_string(lamination_to_string(L));
    CHECK(lamination_to_string(L2) == lamination_to_string(L));
    CHECK(L2.closure == L.closure);
}

TEST_CASE("lamination format comments and errors") {
    auto L = lamination_from_string("# comment\ndegree 2\nleaf 1/3 2/3 # tail\n");
    CHECK(L.degree == 2);
    CHECK(L.closure.size() == 1);

    CHECK_THROWS_AS(lamination_from_string("leaf 1/3 2/3\n"), std::invalid_argument);
    CHECK_THROWS_AS(lamination_from_string("degree 4\n"), std::domain_error);
    CHECK_THROWS_AS(lamination_from_string("degree 2\nblob 1/3\n"), std::invalid_argument);
    CHECK_THROWS_AS(lamination_from_string("degree 2\nleaf 1/3\n"), std::invalid_argument);
}

TEST_CASE("empty lamination serializes to header only") {
    LeafSystem L;
    L.degree = 3;
    CHECK(lamination_to_string(L) == "degree 3\n");
    auto back = lamination_from_string("degree 3\n");
    CHECK(back.closure.empty());
}
