#include <catch2/catch.hpp>

#include "cubilam/angle.hpp"

using namespace cubilam;

namespace {

// Multiplicative order of d modulo q, gcd(d, q) = 1. Test-side oracle.
unsigned long mult_order(unsigned long d, const mpz_class& q) {
    if (q == 1) return 1;
    mpz_class pow = d % q;
    unsigned long n = 1;
    while (pow != 1) {
        pow = (pow * d) % q;
        ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("angle normalization and parsing") {
    CHECK(Angle(3, 6) == Angle(1, 2));
    CHECK(Angle(7, 3) == Angle(1, 3));
    CHECK(Angle(-1, 3) == Angle(2, 3));
    CHECK(Angle(0, 5).str() == "0");
    CHECK(Angle(5, 4).str() == "1/4");
    CHECK(Angle::parse("2/6") == Angle(1, 3));
    CHECK(Angle::parse("0") == Angle());
    CHECK(Angle::parse("0").str() == "0");
    CHECK_THROWS_AS(Angle::parse("x/3"), std::invalid_argument);
    CHECK_THROWS_AS(Angle::parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Angle(1, 0), std::invalid_argument);
}

TEST_CASE("sigma examples") {
    CHECK(sigma(3, Angle(1, 4)) == Angle(3, 4));
    CHECK(sigma(3, Angle(1, 2)) == Angle(1, 2));  // fixed point
    CHECK(sigma(2, Angle(2, 3)) == Angle(1, 3));
    CHECK_THROWS_AS(sigma(4, Angle(1, 3)), std::domain_error);
    CHECK_THROWS_AS(sigma(1, Angle(1, 3)), std::domain_error);
}

TEST_CASE("sigma denominator closure") {
    // denominator of sigma(d, p/q) divides q
    for (long q = 1; q <= 60; ++q) {
        for (long p = 0; p < q; ++p) {
            for (int d : {2, 3}) {
                Angle t(p, q);
                Angle s = sigma(d, t);
                mpz_class den = t.denominator();
                CHECK(den % s.denominator() == 0);
            }
        }
    }
}

TEST_CASE("orbit_info examples") {
    auto o1 = orbit_info(3, Angle(1, 8));
    CHECK(o1.preperiod == 0);
    CHECK(o1.period == 2);
    REQUIRE(o1.orbit.size() == 2);
    CHECK(o1.orbit[0] == Angle(1, 8));
    CHECK(o1.orbit[1] == Angle(3, 8));

    auto o2 = orbit_info(3, Angle(1, 6));
    CHECK(o2.preperiod == 1);
    CHECK(o2.period == 1);
    REQUIRE(o2.orbit.size() == 2);
    CHECK(o2.orbit[0] == Angle(1, 6));
    CHECK(o2.orbit[1] == Angle(1, 2));

    auto o3 = orbit_info(2, Angle(1, 7));
    CHECK(o3.preperiod == 0);
    CHECK(o3.period == 3);
    REQUIRE(o3.orbit.size() == 3);
    CHECK(o3.orbit[1] == Angle(2, 7));
    CHECK(o3.orbit[2] == Angle(4, 7));
}

TEST_CASE("orbit invariant: sigma of last entry returns to index preperiod") {
    for (long q = 1; q <= 40; ++q) {
        for (long p = 0; p < q; ++p) {
            for (int d : {2, 3}) {
                Angle t(p, q);
                auto info = orbit_info(d, t);
                REQUIRE(info.orbit.size() == info.preperiod + info.period);
                Angle back = sigma(d, info.orbit.back());
                CHECK(back == info.orbit[info.preperiod]);
            }
        }
    }
}

TEST_CASE("period equals multiplicative order for purely periodic angles") {
    for (long q = 1; q <= 80; ++q) {
        for (int d : {2, 3}) {
            if (mpz_class(q) % d == 0) continue;
            // p/q reduced with gcd(q, d) = 1 is purely periodic
            for (long p = 0; p < q; ++p) {
                Angle t(p, q);
                if (t.denominator() % d == 0) continue;
                auto info = orbit_info(d, t);
                CHECK(info.preperiod == 0);
                unsigned long ord = mult_order(d, t.denominator());
                CHECK(ord % info.period == 0);
                CHECK(info.period == ord);
            }
        }
    }
}

TEST_CASE("arc_length examples and complement property") {
    CHECK(arc_length(Angle(1, 3), Angle(2, 3)) == Rational(1, 3));
    CHECK(arc_length(Angle(2, 3), Angle(1, 3)) == Rational(2, 3));
    CHECK(arc_length(Angle(1, 8), Angle(5, 8)) == Rational(1, 2));
    CHECK_THROWS_AS(arc_length(Angle(1, 3), Angle(1, 3)), std::invalid_argument);

    for (long i = 0; i < 12; ++i) {
        for (long j = 0; j < 12; ++j) {
            if (i == j) continue;
            Angle a(i, 12), b(j, 12);
            CHECK(arc_length(a, b) + arc_length(b, a) == 1);
        }
    }
}

TEST_CASE("open arc membership") {
    CHECK(in_open_arc(Angle(1, 2), Angle(1, 3), Angle(2, 3)));
    CHECK_FALSE(in_open_arc(Angle(1, 3), Angle(1, 3), Angle(2, 3)));
    CHECK_FALSE(in_open_arc(Angle(0), Angle(1, 3), Angle(2, 3)));
    CHECK(in_open_arc(Angle(0), Angle(2, 3), Angle(1, 3)));  // wrap-around arc
    CHECK(in_closed_arc(Angle(1, 3), Angle(1, 3), Angle(2, 3)));
}

TEST_CASE("sigma preimages") {
    auto pre = sigma_preimages(3, Angle(0));
    REQUIRE(pre.size() == 3);
    CHECK(pre[0] == Angle(0));
    CHECK(pre[1] == Angle(1, 3));
    CHECK(pre[2] == Angle(2, 3));
    for (const auto& p : sigma_preimages(3, Angle(5, 8)))
        CHECK(sigma(3, p) == Angle(5, 8));
}
