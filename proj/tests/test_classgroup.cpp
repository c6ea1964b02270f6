#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hmtheta/classgroup.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace hmtheta;

TEST_CASE("narrow class numbers") {
    CHECK(narrow_class_group(FieldCtx::rationals()).size() == 1);
    CHECK(narrow_class_group(FieldCtx::quadratic(17)).size() == 1);
    CHECK(narrow_class_group(FieldCtx::quadratic(793)).size() == 8);
    CHECK(narrow_class_group(FieldCtx::quadratic(33)).size() == 2);
    CHECK_THROWS_AS(narrow_class_group(FieldCtx::quadratic(100003), 100000), Error);
}

TEST_CASE("group axioms on the composition table") {
    auto g = narrow_class_group(FieldCtx::quadratic(793));
    int h = g.size();
    REQUIRE(h == 8);
    for (int i = 0; i < h; ++i) {
        CHECK(g.compose(i, g.identity) == i);
        CHECK(g.compose(g.inverse(i), i) == g.identity);
        for (int j = 0; j < h; ++j) {
            CHECK(g.compose(i, j) == g.compose(j, i));
            for (int k = 0; k < h; ++k)
                CHECK(g.compose(g.compose(i, j), k) == g.compose(i, g.compose(j, k)));
        }
    }
}

TEST_CASE("genus theory cross-check: 2-rank of Cl+ is (number of prime factors of D) - 1") {
    for (long D : {17L, 33L, 41L, 65L, 105L, 145L, 793L}) {
        auto ctx = FieldCtx::quadratic(D);
        auto g = narrow_class_group(ctx);
        int sq = static_cast<int>(g.squares_subgroup().size());
        int genera = g.size() / sq; // |Cl+ / Cl+^2|
        int t = static_cast<int>(factor_trial(Int(D)).size());
        CHECK(genera == (1 << (t - 1)));
    }
}

TEST_CASE("class_of is constant on narrow classes and multiplicative") {
    auto ctx = FieldCtx::quadratic(793);
    auto g = narrow_class_group(ctx);
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> d(-12, 12);

    CHECK(g.class_of(unit_ideal(ctx)) == g.identity);

    int checked = 0;
    while (checked < 40) {
        QuadElem lam = ctx.elem(d(rng), d(rng));
        if (lam.is_zero())
            continue;
        FracIdeal I = ideal_pow(place_ideal(ctx, primes_above(ctx, 2)[0]), 1 + (checked % 3));
        if (totally_positive(lam))
            CHECK(g.class_of(principal_ideal(ctx, lam) * I) == g.class_of(I));
        FracIdeal J = principal_ideal(ctx, lam);
        CHECK(g.class_of(I * J) == g.compose(g.class_of(I), g.class_of(J)));
        ++checked;
    }

    QuadElem tp = ctx.elem(30, 1); // 30 + sqrt(793) is totally positive
    REQUIRE(totally_positive(tp));
    CHECK(g.class_of(principal_ideal(ctx, tp)) == g.identity);

    int cd = g.class_of(different(ctx));
    CHECK(g.compose(cd, cd) == g.class_of(different(ctx) * different(ctx)));

    // class_ideal round trip
    for (int i = 0; i < g.size(); ++i)
        CHECK(g.class_of(g.class_ideal(i)) == i);
}

TEST_CASE("wide kernel and square preimages") {
    // D=793: N(eps)=1, so (sqrt D) is principal but not narrowly: kernel order 2
    auto ctx = FieldCtx::quadratic(793);
    auto g = narrow_class_group(ctx);
    int k = g.wide_kernel_class();
    CHECK(k != g.identity);
    CHECK(g.compose(k, k) == g.identity);

    // D=17: N(eps)=-1, every principal ideal is narrowly principal
    auto g17 = narrow_class_group(FieldCtx::quadratic(17));
    CHECK(g17.wide_kernel_class() == g17.identity);

    CHECK(sq_preimage_count(g17, g17.identity) == 1);
    CHECK(sq_preimage_count(narrow_class_group(FieldCtx::rationals()), 0) == 1);

    // total preimage count over all targets equals |Cl| = |Cl+|/|kernel|
    long total = 0;
    for (int i = 0; i < g.size(); ++i)
        total += sq_preimage_count(g, i);
    CHECK(total == g.size() / 2);

    for (int i = 0; i < g.size(); ++i)
        CHECK(sq_preimage_count(g, g.compose(i, i)) >= 1);
}

TEST_CASE("membership in H-bar is stable under multiplying by squares") {
    auto ctx = FieldCtx::quadratic(793);
    auto g = narrow_class_group(ctx);
    auto t3 = T3_places(ctx);
    REQUIRE(t3.size() == 2); // 793 = 1 mod 24

    std::vector<int> gens = g.squares_subgroup();
    gens.push_back(g.compose(g.class_of(place_ideal(ctx, t3[0])),
                             g.class_of(place_ideal(ctx, t3[1]))));
    auto hq = g.subgroup_closure(gens);
    auto member = [&](int x) { return std::binary_search(hq.begin(), hq.end(), x); };
    for (int x = 0; x < g.size(); ++x)
        for (int s = 0; s < g.size(); ++s)
            CHECK(member(x) == member(g.compose(x, g.compose(s, s))));
}

TEST_CASE("class_group_criterion") {
    // F = Q, weight 1/2: odd case, T3 nonempty, trivial group: exists
    auto gq = narrow_class_group(FieldCtx::rationals());
    auto r = class_group_criterion(gq, {HalfWeight::Half});
    CHECK(r.exists);
    CHECK(r.case_no == 2);
    r = class_group_criterion(gq, {HalfWeight::ThreeHalves});
    CHECK(r.exists);
    CHECK(r.case_no == 1);

    // D=17: Cl+ trivial: even case exists
    auto g17 = narrow_class_group(FieldCtx::quadratic(17));
    r = class_group_criterion(g17, {HalfWeight::Half, HalfWeight::Half});
    CHECK(r.exists);
    CHECK(r.case_no == 1);
    // odd case: T3 empty (3 is inert in Q(sqrt 17)): no triple
    r = class_group_criterion(g17, {HalfWeight::Half, HalfWeight::ThreeHalves});
    CHECK(!r.exists);
    CHECK(r.case_no == 2);

    // D=793: every weight vector admits a triple
    auto g793 = narrow_class_group(FieldCtx::quadratic(793));
    for (auto w1 : {HalfWeight::Half, HalfWeight::ThreeHalves})
        for (auto w2 : {HalfWeight::Half, HalfWeight::ThreeHalves})
            CHECK(class_group_criterion(g793, {w1, w2}).exists);

    // 2 not split: refused
    CHECK_THROWS_AS(class_group_criterion(narrow_class_group(FieldCtx::quadratic(5)),
                                   {HalfWeight::Half, HalfWeight::Half}),
                    Error);
}

TEST_CASE("reduction cycles partition the reduced forms") {
    Int delta = 793;
    auto forms = reduced_forms(delta);
    CHECK(forms.size() == 72);
    for (auto& f : forms) {
        CHECK(form_is_reduced(f, delta));
        CHECK(form_is_reduced(form_rho(f, delta), delta));
        CHECK(f.b * f.b - 4 * f.a * f.c == delta);
    }
    // rho is a bijection on the reduced forms
    std::set<std::tuple<Int, Int, Int>> images;
    for (auto& f : forms)
        images.insert([&] {
            auto g = form_rho(f, delta);
            return std::make_tuple(g.a, g.b, g.c);
        }());
    CHECK(images.size() == forms.size());
}
