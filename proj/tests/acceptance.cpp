// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails.  Tolerances and thresholds are pinned in code.

#include "hmtheta/existence.hpp"
#include "hmtheta/theta.hpp"

#include <chrono>
#include <cstdio>
#include <random>

using namespace hmtheta;

namespace {

int n_failed = 0;

void report(int n, bool ok, const char* what) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, what);
    if (!ok)
        ++n_failed;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool is_squarefree(long n) {
    for (long d = 2; d * d <= n; ++d)
        if (n % (d * d) == 0)
            return false;
    return true;
}

// ---- criteria 1 and 2: eta baselines -------------------------------------

bool eta_baseline(HalfWeight w, const char* /*name*/, double& elapsed) {
    auto t0 = std::chrono::steady_clock::now();
    FieldCtx q = FieldCtx::rationals();
    auto t = construct_triple(q, {w});
    if (!t)
        return false;

    // the witness class: (1/24, {3}, Z) at weight 1/2, (1/8, {}, Z) at 3/2
    GTriple ref;
    ref.weights = {w};
    ref.ideal = unit_ideal(q);
    if (w == HalfWeight::Half) {
        ref.beta = q.from_rat(Rat(1, 24));
        ref.s3 = T3_places(q);
    } else {
        ref.beta = q.from_rat(Rat(1, 8));
    }
    if (!is_in_G(q, ref) || !triples_equivalent(q, *t, ref))
        return false;

    std::mt19937 rng(w == HalfWeight::Half ? 101 : 202);
    std::uniform_real_distribution<double> ur(-1.5, 1.5), ui(0.3, 3.0);
    for (int i = 0; i < 20; ++i) {
        std::complex<double> z(ur(rng), ui(rng));
        std::complex<double> ref_val =
            (w == HalfWeight::Half) ? 2.0 * eta(z) : 2.0 * eta_cubed(z);
        std::complex<double> got = evaluate(q, *t, EvalPoint{{z}}, 1e-12);
        if (std::abs(got - ref_val) / std::abs(ref_val) >= 1e-9)
            return false;
    }
    elapsed = seconds_since(t0);
    return true;
}

// ---- criterion 3: multiplier exactness ------------------------------------

bool multiplier_exactness() {
    FieldCtx q = FieldCtx::rationals();
    auto half = construct_triple(q, {HalfWeight::Half});
    auto three = construct_triple(q, {HalfWeight::ThreeHalves});
    if (!half || !three)
        return false;
    MultiplierSpec mh{q, *half}, m3{q, *three};

    long checked = 0;
    for (long a = -20; a <= 20; ++a)
        for (long c = -20; c <= 20; ++c)
            for (long d = -20; d <= 20; ++d) {
                if (c == 0) {
                    if (a * d != 1)
                        continue;
                    for (long b = -20; b <= 20; ++b) {
                        SL2Mat g = make_sl2z(q, a, b, 0, d);
                        UnitRoot e = v_eta(g);
                        if (!(v_lambda(mh, g) == e) || !(v_lambda(m3, g) == e.pow(3)))
                            return false;
                        ++checked;
                    }
                    continue;
                }
                if ((a * d - 1) % c != 0)
                    continue;
                long b = (a * d - 1) / c;
                if (std::abs(b) > 20)
                    continue;
                SL2Mat g = make_sl2z(q, a, b, c, d);
                UnitRoot e = v_eta(g);
                if (!(v_lambda(mh, g) == e) || !(v_lambda(m3, g) == e.pow(3)))
                    return false;
                ++checked;
            }
    if (checked < 4000)
        return false;

    SL2Mat T = make_sl2z(q, 1, 1, 0, 1), S = make_sl2z(q, 0, -1, 1, 0);
    std::mt19937 rng(303);
    for (int i = 0; i < 500; ++i) {
        SL2Mat g = sl2_identity(q);
        int len = 1 + rng() % 14;
        for (int j = 0; j < len; ++j)
            g = g * (rng() % 2 ? T : S);
        UnitRoot e = v_eta(g);
        if (!(v_lambda(mh, g) == e) || !(v_lambda(m3, g) == e.pow(3)))
            return false;
    }
    return true;
}

// ---- criterion 4: cocycle law ----------------------------------------------

bool cocycle_law() {
    std::mt19937 rng(404);
    for (long D : {0L, 17L, 793L}) {
        FieldCtx ctx = D ? FieldCtx::quadratic(D) : FieldCtx::rationals();
        std::vector<HalfWeight> w(ctx.degree(), HalfWeight::Half);
        auto t = construct_triple(ctx, w);
        if (!t)
            return false;
        MultiplierSpec spec{ctx, *t};
        auto vl = [&](const SL2Mat& g) { return v_lambda(spec, g); };

        auto gens = sl2_generators(ctx);
        if (D) {
            auto [eps, n] = fundamental_unit(ctx);
            (void)n;
            gens.push_back(make_sl2(eps, ctx.from_rat(0), ctx.from_rat(0),
                                    ctx.from_rat(1) / eps));
        }
        for (int i = 0; i < 100; ++i) {
            SL2Mat g1 = sl2_identity(ctx), g2 = sl2_identity(ctx);
            for (int j = 0; j < 3; ++j) {
                g1 = g1 * gens[rng() % gens.size()];
                g2 = g2 * gens[rng() % gens.size()];
            }
            if (!cocycle_check(ctx, vl, g1, g2))
                return false;
        }
    }
    return true;
}

// ---- criterion 5: symbol suite ----------------------------------------------

bool symbol_suite() {
    std::mt19937 rng(505);
    FieldCtx q = FieldCtx::rationals();

    // bimultiplicativity and symmetry on 500 random local triples across
    // place kinds (real, split, inert, ramified, dyadic Q_2)
    {
        std::vector<std::pair<FieldCtx, LocalContext>> places;
        FieldCtx c17 = FieldCtx::quadratic(17), c793 = FieldCtx::quadratic(793);
        places.emplace_back(q, LocalContext::real_place(q, 1));
        places.emplace_back(c793, LocalContext::real_place(c793, 2));
        places.emplace_back(q, LocalContext::finite(q, primes_above(q, 2)[0]));
        places.emplace_back(q, LocalContext::finite(q, primes_above(q, 7)[0]));
        places.emplace_back(c17, LocalContext::finite(c17, primes_above(c17, 2)[0]));
        places.emplace_back(c17, LocalContext::finite(c17, primes_above(c17, 5)[0]));  // inert
        places.emplace_back(c17, LocalContext::finite(c17, primes_above(c17, 17)[0])); // ramified
        places.emplace_back(c793, LocalContext::finite(c793, primes_above(c793, 3)[0]));
        std::uniform_int_distribution<int> d(-25, 25);
        int done = 0;
        while (done < 500) {
            auto& [ctx, lc] = places[done % places.size()];
            QuadElem a = ctx.D ? ctx.elem(d(rng), d(rng)) : ctx.from_rat(d(rng));
            QuadElem b = ctx.D ? ctx.elem(d(rng), d(rng)) : ctx.from_rat(d(rng));
            QuadElem c = ctx.D ? ctx.elem(d(rng), d(rng)) : ctx.from_rat(d(rng));
            if (a.is_zero() || b.is_zero() || c.is_zero())
                continue;
            if (hilbert(a, b, lc) != hilbert(b, a, lc))
                return false;
            if (hilbert(a, b * c, lc) != hilbert(a, b, lc) * hilbert(a, c, lc))
                return false;
            if (hilbert(a, b * b, lc) != 1 || hilbert(a, -a, lc) != 1)
                return false;
            ++done;
        }
    }

    // rational product formula on 200 pairs
    {
        std::uniform_int_distribution<long> d(-300, 300);
        int done = 0;
        while (done < 200) {
            long a = d(rng), b = d(rng);
            if (a == 0 || b == 0)
                continue;
            int prod = hilbert(q.from_rat(a), q.from_rat(b), LocalContext::real_place(q, 1));
            std::set<long> primes{2};
            for (long n : {a, b})
                for (auto [p, e] : factor_trial(Int(n))) {
                    (void)e;
                    primes.insert(p);
                }
            for (long p : primes)
                prod *= hilbert(q.from_rat(a), q.from_rat(b),
                                LocalContext::finite(q, primes_above(q, p)[0]));
            if (prod != 1)
                return false;
            ++done;
        }
    }

    // Kubota 2-cocycle identity on 200 triples
    {
        FieldCtx c17 = FieldCtx::quadratic(17);
        for (auto ctx : {q, c17}) {
            auto gens = sl2_generators(ctx);
            std::vector<LocalContext> lcs;
            lcs.push_back(LocalContext::real_place(ctx, 1));
            for (long p : {2L, 3L, 5L})
                for (auto& v : primes_above(ctx, p))
                    if (v.p != 2 || v.is_dyadic_q2())
                        lcs.push_back(LocalContext::finite(ctx, v));
            for (int i = 0; i < 100; ++i) {
                SL2Mat g1 = sl2_identity(ctx), g2 = sl2_identity(ctx), g3 = sl2_identity(ctx);
                for (int j = 0; j < 3; ++j) {
                    g1 = g1 * gens[rng() % gens.size()];
                    g2 = g2 * gens[rng() % gens.size()];
                    g3 = g3 * gens[rng() % gens.size()];
                }
                auto& lc = lcs[rng() % lcs.size()];
                int lhs = kubota_cocycle(g1, g2, lc) * kubota_cocycle(g1 * g2, g3, lc);
                int rhs = kubota_cocycle(g1, g2 * g3, lc) * kubota_cocycle(g2, g3, lc);
                if (lhs != rhs)
                    return false;
            }
        }
    }

    // v0 closed form on exhaustive small matrices
    {
        auto closed = [&](const SL2Mat& g) {
            Int c = boost::multiprecision::numerator(g.c.x);
            Int d = boost::multiprecision::numerator(g.d.x);
            return (c % 2 != 0) ? jacobi_star(d, c, StarVariant::Upper)
                                : jacobi_star(c, d, StarVariant::Lower);
        };
        for (long a = -12; a <= 12; ++a)
            for (long c = -12; c <= 12; ++c)
                for (long d = -12; d <= 12; ++d) {
                    if (c == 0) {
                        if (a * d != 1)
                            continue;
                        for (long b = -12; b <= 12; ++b) {
                            SL2Mat g = make_sl2z(q, a, b, 0, d);
                            if (v0(q, g) != closed(g))
                                return false;
                        }
                        continue;
                    }
                    if ((a * d - 1) % c != 0)
                        continue;
                    long b = (a * d - 1) / c;
                    if (std::abs(b) > 12)
                        continue;
                    SL2Mat g = make_sl2z(q, a, b, c, d);
                    if (v0(q, g) != closed(g))
                        return false;
                }
    }

    // min ord(a^2 - 1): 0 for Q_5, 1 at a q = 3 place, 3 for Q_2
    FieldCtx c793 = FieldCtx::quadratic(793);
    if (min_unit_sq_val(q, primes_above(q, 5)[0]) != 0)
        return false;
    if (min_unit_sq_val(q, primes_above(q, 3)[0]) != 1)
        return false;
    if (min_unit_sq_val(c793, primes_above(c793, 3)[0]) != 1)
        return false;
    if (min_unit_sq_val(q, primes_above(q, 2)[0]) != 3)
        return false;
    return true;
}

// ---- criterion 6: the D = 793 reference field --------------------------------

bool example_field_793(double& elapsed) {
    auto t0 = std::chrono::steady_clock::now();
    auto ctx = FieldCtx::quadratic(793);
    QuadElem rho(Rat(5, 2), Rat(1, 2), 793);
    if (rho.norm() != -192)
        return false;

    // (rho) = q2^6 q3 with q2 = (2, (1+sqrt D)/2), q3 = (3, 1 - sqrt D)
    auto fac = factor_ideal(principal_ideal(ctx, rho));
    if (fac.size() != 2)
        return false;
    PrimePlace q2place, q3place;
    for (auto& [v, e] : fac) {
        if (v.p == 2 && e == 6)
            q2place = v;
        else if (v.p == 3 && e == 1)
            q3place = v;
        else
            return false;
    }
    FracIdeal q2 = place_ideal(ctx, q2place), q3 = place_ideal(ctx, q3place);
    if (!ideal_contains(q2, ctx.omega()) || !ideal_contains(q2, ctx.from_rat(2)))
        return false;
    if (!ideal_contains(q3, ctx.elem(1, -1)) || !ideal_contains(q3, ctx.from_rat(3)))
        return false;
    if (!(ideal_pow(q2, 6) * q3 == principal_ideal(ctx, rho)))
        return false;

    // (8 beta) d q3 = a^2 with beta = rho sqrt(D)/8 and a = d q2^3 q3
    QuadElem beta = Rat(1, 8) * ctx.sqrtD() * rho;
    FracIdeal a = different(ctx) * ideal_pow(q2, 3) * q3;
    FracIdeal lhs = principal_ideal(ctx, Rat(8) * beta) * different(ctx) * q3;
    if (!(lhs == a * a))
        return false;

    if (narrow_class_group(ctx).size() != 8)
        return false;
    if (fundamental_unit(ctx).second != 1)
        return false;
    elapsed = seconds_since(t0);
    return elapsed < 30.0;
}

// ---- criterion 7: transformation law ----------------------------------------

bool transformation_law() {
    for (long D : {17L, 793L}) {
        auto ctx = FieldCtx::quadratic(D);
        std::vector<HalfWeight> w{HalfWeight::Half, HalfWeight::Half}; // exists for both
        auto t = construct_triple(ctx, w);
        if (!t)
            return false;
        SuiteReport rep = transform_suite(ctx, *t, 50, 6, 5, 1e-6, 700 + D);
        if (!rep.pass)
            return false;
    }
    return true;
}

// ---- criterion 8: criteria agreement ------------------------------------------

bool criteria_agreement() {
    for (long D = 9; D < 2000; D += 8) {
        if (!is_squarefree(D))
            continue;
        auto ctx = FieldCtx::quadratic(D);
        auto cg = narrow_class_group(ctx);
        for (auto par : {std::vector<HalfWeight>{HalfWeight::Half, HalfWeight::Half},
                         std::vector<HalfWeight>{HalfWeight::Half, HalfWeight::ThreeHalves}}) {
            if (quadratic_criteria(ctx, par).exists != class_group_criterion(cg, par).exists)
                return false;
        }
    }
    for (long N = 1; N <= 10000; ++N) {
        if (!is_squarefree(N))
            continue;
        if (two_squares(N).has_value() != norm_criterion(N, 1))
            return false;
        if (three_u2_v2(N).has_value() != norm_criterion(N, 3))
            return false;
    }
    return true;
}

// ---- criterion 9: class counts vs witnesses ------------------------------------

bool class_counts() {
    FieldCtx q = FieldCtx::rationals();
    auto cgq = narrow_class_group(q);
    if (equiv_classes(q, cgq, {HalfWeight::Half}) != 1)
        return false;
    if (equiv_classes(q, cgq, {HalfWeight::ThreeHalves}) != 1)
        return false;

    for (long D : {17L, 793L}) {
        auto ctx = FieldCtx::quadratic(D);
        auto cg = narrow_class_group(ctx);
        for (auto par : {std::vector<HalfWeight>{HalfWeight::Half, HalfWeight::Half},
                         std::vector<HalfWeight>{HalfWeight::Half, HalfWeight::ThreeHalves},
                         std::vector<HalfWeight>{HalfWeight::ThreeHalves, HalfWeight::ThreeHalves}}) {
            long count = equiv_classes(ctx, cg, par);
            std::vector<GTriple> all;
            for (auto& s3 : admissible_s3_sets(ctx, par))
                for (auto& w : witnesses_for_s3(ctx, cg, par, s3)) {
                    if (!is_in_G(ctx, w))
                        return false;
                    all.push_back(w);
                }
            if (count != static_cast<long>(all.size()))
                return false;
            for (size_t i = 0; i < all.size(); ++i)
                for (size_t j = i + 1; j < all.size(); ++j)
                    if (triples_equivalent(ctx, all[i], all[j]))
                        return false;
        }
    }
    return true;
}

} // namespace

int main() {
    double el1 = 0, el2 = 0, el6 = 0;

    bool c1 = eta_baseline(HalfWeight::Half, "eta", el1) && el1 < 5.0;
    report(1, c1, "weight 1/2 triple is (1/24, {3}, Z) and theta = 2 eta to 1e-9 at 20 points, under 5 s");

    bool c2 = eta_baseline(HalfWeight::ThreeHalves, "eta^3", el2);
    report(2, c2, "weight 3/2 triple is (1/8, {}, Z) and theta = 2 eta^3 to 1e-9 at 20 points");

    report(3, multiplier_exactness(),
           "v_lambda = v_eta exactly (entries <= 20 exhaustive, 500 random words), and cubed at weight 3/2");

    report(4, cocycle_law(), "v(g1)v(g2) = c_inf(g1,g2) v(g1 g2) on 100 random pairs over Q, Q(sqrt 17), Q(sqrt 793)");

    report(5, symbol_suite(),
           "Hilbert bimultiplicativity/symmetry (500), product formula (200), Kubota identity (200), "
           "v0 closed form, M = (0,1,3)");

    bool c6 = example_field_793(el6);
    report(6, c6, "D=793: N(rho) = -192, (rho) = q2^6 q3, (8 beta) d q3 = a^2, |Cl+| = 8, N(eps) = 1, under 30 s");

    report(7, transformation_law(),
           "theta transformation law at rel err < 1e-6 on 50 random words (length <= 6), 5 points each, D in {17, 793}");

    report(8, criteria_agreement(),
           "congruence criteria = class-group criterion for square-free D = 1 mod 8 below 2000, both parities; "
           "representation scans = inert-prime criterion to 10^4");

    report(9, class_counts(),
           "class counts: 1 per weight over Q; D in {17, 793} formula equals the number of constructed, "
           "verified, pairwise-inequivalent witnesses");

    if (n_failed) {
        std::printf("%d criteria FAILED\n", n_failed);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
