#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hmtheta/arith.hpp"

#include <random>

using namespace hmtheta;

TEST_CASE("quadratic arithmetic is exact") {
    QuadElem a(1, 1, 17), b(1, -1, 17);
    CHECK((a * b) == QuadElem(-16, 0, 17));

    // (5+sqrt793)/2 * (5-sqrt793)/2 = -192
    QuadElem rho(Rat(5, 2), Rat(1, 2), 793);
    CHECK((rho * rho.conj()) == QuadElem(-192, 0, 793));
    CHECK(rho.norm() == -192);

    QuadElem three(3, 0, 17), two(2, 0, 17);
    CHECK((three / two) == QuadElem(Rat(3, 2), 0, 17));

    CHECK_THROWS_AS(three / QuadElem(0, 0, 17), Error);
}

TEST_CASE("norm is multiplicative") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(-30, 30);
    for (int i = 0; i < 200; ++i) {
        QuadElem a(Rat(d(rng), 1 + std::abs(d(rng))), Rat(d(rng), 1 + std::abs(d(rng))), 17);
        QuadElem b(Rat(d(rng), 1 + std::abs(d(rng))), Rat(d(rng), 1 + std::abs(d(rng))), 17);
        CHECK((a * b).norm() == a.norm() * b.norm());
    }
}

TEST_CASE("embedding signs, exactly") {
    QuadElem a(Rat(1, 2), Rat(1, 2), 17); // (1+sqrt17)/2
    CHECK(embedding_sign(a, 1) == 1);
    CHECK(embedding_sign(a, 2) == -1);

    // sqrt(793)*(5+sqrt793)/2 is totally positive
    QuadElem rho(Rat(5, 2), Rat(1, 2), 793);
    QuadElem s(0, 1, 793);
    CHECK(embedding_sign(s * rho, 1) == 1);
    CHECK(embedding_sign(s * rho, 2) == 1);
    CHECK(totally_positive(s * rho));

    CHECK(embedding_sign(QuadElem(0, 0, 17), 1) == 0);
    CHECK(embedding_sign(QuadElem(0, 0, 17), 2) == 0);
}

TEST_CASE("embedding sign is multiplicative") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> d(-25, 25);
    for (int i = 0; i < 500; ++i) {
        QuadElem a(d(rng), d(rng), 793), b(d(rng), d(rng), 793);
        if (a.is_zero() || b.is_zero())
            continue;
        for (int pl = 1; pl <= 2; ++pl)
            CHECK(embedding_sign(a * b, pl) == embedding_sign(a, pl) * embedding_sign(b, pl));
    }
}

TEST_CASE("padic_frac") {
    CHECK(padic_frac(Rat(1, 24), 2) == Rat(3, 8));
    CHECK(padic_frac(Rat(1, 24), 3) == Rat(2, 3));
    CHECK(padic_frac(Rat(5), 7) == 0);
    CHECK(padic_frac(Rat(-1, 24), 2) == Rat(5, 8));

    // additivity mod 1
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> num(-50, 50);
    std::uniform_int_distribution<int> den(1, 60);
    for (long p : {2L, 3L, 5L}) {
        for (int i = 0; i < 300; ++i) {
            Rat x(num(rng), den(rng)), y(num(rng), den(rng));
            Rat lhs = padic_frac(x + y, p);
            Rat rhs = padic_frac(x, p) + padic_frac(y, p);
            // equality mod 1: the difference must be an integer
            CHECK(boost::multiprecision::denominator(Rat(lhs - rhs)) == 1);
        }
    }
}

TEST_CASE("hensel roots of the minimal polynomial of omega") {
    // D=17, p=2, k=3: exhaustive scan of t^2 - t - 4 mod 8 gives {4, 5}
    std::vector<long> sols;
    for (long t = 0; t < 8; ++t)
        if ((t * t - t - 4) % 8 == 0)
            sols.push_back(t);
    REQUIRE(sols.size() == 2);
    PadicResidue r1 = hensel_root(17, 2, 3, 1);
    PadicResidue r2 = hensel_root(17, 2, 3, 2);
    CHECK(r1.value == sols[0]);
    CHECK(r2.value == sols[1]);
    CHECK(r1.value % 2 == 0); // place 1 lifts the smaller residue mod 2
    CHECK(r2.value % 2 == 1);

    // D=793, p=3: t^2 - t - 198 = t(t-1) mod 3
    CHECK(hensel_root(793, 3, 1, 1).value == 0);
    CHECK(hensel_root(793, 3, 1, 2).value == 1);

    // D=17, p=13: exhaustive scan oracle
    std::vector<long> s13;
    for (long t = 0; t < 13; ++t)
        if ((t * t - t - 4) % 13 == 0)
            s13.push_back(t);
    REQUIRE(s13.size() == 2);
    CHECK(hensel_root(17, 13, 1, 1).value == s13[0]);
    CHECK(hensel_root(17, 13, 1, 2).value == s13[1]);

    CHECK_THROWS_AS(hensel_root(17, 3, 1, 1), Error); // 17 = 2 mod 3: inert
    CHECK_THROWS_AS(hensel_root(17, 17, 1, 1), Error); // ramified
}

TEST_CASE("hensel roots are compatible across precisions") {
    for (long D : {17L, 793L}) {
        for (long p : {2L, 5L, 13L}) {
            bool split = true;
            try {
                hensel_root(D, p, 1, 1);
            } catch (const Error&) {
                split = false;
            }
            if (!split)
                continue;
            for (int k = 1; k <= 6; ++k) {
                PadicResidue hi = hensel_root(D, p, 6, 1);
                PadicResidue lo = hensel_root(D, p, k, 1);
                Int pk = 1;
                for (int i = 0; i < k; ++i)
                    pk *= p;
                CHECK(hi.value % pk == lo.value);
                // and it is a genuine root
                Int f = (D % 4 == 1) ? lo.value * lo.value - lo.value - Int(D - 1) / 4
                                     : lo.value * lo.value - D;
                CHECK(f % pk == 0);
            }
        }
    }
}

TEST_CASE("omega coordinates round trip") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> d(-40, 40);
    for (int i = 0; i < 200; ++i) {
        QuadElem a(Rat(d(rng), 2), Rat(d(rng), 2), 17);
        auto [u, v] = a.omega_coords();
        CHECK(QuadElem::from_omega_coords(u, v, 17) == a);
    }
    CHECK(QuadElem(Rat(1, 2), Rat(1, 2), 17).is_integral()); // omega itself
    CHECK(!QuadElem(Rat(1, 2), 0, 17).is_integral());
}
