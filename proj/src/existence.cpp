#include "hmtheta/existence.hpp"

#include <algorithm>

namespace hmtheta {

std::optional<std::pair<Int, Int>> two_squares(const Int& N) {
    for (Int u = 0; u * u <= N; ++u) {
        Int v;
        if (is_square(N - u * u, v))
            return std::make_pair(u, v);
    }
    return std::nullopt;
}

std::optional<std::pair<Int, Int>> three_u2_v2(const Int& N) {
    for (Int u = 0; 3 * u * u <= N; ++u) {
        Int v;
        if (is_square(N - 3 * u * u, v))
            return std::make_pair(u, v);
    }
    return std::nullopt;
}

bool norm_criterion(const Int& N, int which) {
    if (which != 1 && which != 3)
        throw Error("norm_criterion: which must be 1 or 3");
    for (auto [p, e] : factor_trial(N)) {
        (void)e;
        if (which == 1) {
            // inert in Q(i): p = 3 mod 4
            if (p % 4 == 3)
                return false;
        } else {
            // inert in Q(sqrt -3): p = 2 mod 3
            if (p % 3 == 2)
                return false;
        }
    }
    return true;
}

namespace {

int count_three_halves(const std::vector<HalfWeight>& weights) {
    int n = 0;
    for (auto w : weights)
        if (w == HalfWeight::ThreeHalves)
            ++n;
    return n;
}

} // namespace

ExistenceReport quadratic_criteria(const FieldCtx& ctx, const std::vector<HalfWeight>& weights) {
    if (ctx.D == 0)
        throw Error("quadratic_criteria needs a quadratic field");
    if (!ctx.two_splits())
        throw Error("no multiplier system of half-integral weight exists: 2 does not split completely");
    if (static_cast<int>(weights.size()) != ctx.degree())
        throw Error("weight vector length must equal the degree");

    bool c1 = true, c2 = true;
    for (auto [p, e] : factor_trial(Int(ctx.D))) {
        (void)e;
        if (p % 4 != 1)
            c1 = false;
        if (p % 3 == 2)
            c2 = false;
    }

    ExistenceReport rep;
    if (count_three_halves(weights) % 2 == 0) {
        // C3 (3 split, both places taken) needs the same congruence as C1
        // plus D = 1 mod 24; C1 has the smaller S3, so it is the witness case
        rep.exists = c1;
        rep.case_label = "C1";
    } else {
        rep.exists = c2;
        rep.case_label = "C2";
    }
    return rep;
}

bool is_in_G(const FieldCtx& ctx, const GTriple& t) {
    if (static_cast<int>(t.weights.size()) != ctx.degree())
        return false;
    if (!totally_positive(t.beta))
        return false;
    auto t3 = T3_places(ctx);
    for (auto& v : t.s3) {
        bool found = false;
        for (auto& w : t3)
            if (v == w)
                found = true;
        if (!found)
            return false;
    }
    // condition (A): |S2| + |S3| + |S_inf| even
    int s2 = static_cast<int>(S2_places(ctx).size());
    if ((s2 + static_cast<int>(t.s3.size()) + count_three_halves(t.weights)) % 2 != 0)
        return false;
    // (8 beta) d prod p_v = a^2
    FracIdeal lhs = principal_ideal(ctx, Rat(8) * t.beta) * different(ctx);
    for (auto& v : t.s3)
        lhs = lhs * place_ideal(ctx, v);
    return lhs == t.ideal * t.ideal;
}

GTriple normalize_triple(const FieldCtx& ctx, const GTriple& t) {
    std::vector<PrimePlace> bad = S2_places(ctx);
    for (auto& v : t.s3)
        bad.push_back(v);
    std::vector<int> ords;
    bool clean = true;
    for (auto& v : bad) {
        ords.push_back(ord_at(t.ideal, v));
        if (ords.back() != 0)
            clean = false;
    }
    if (clean)
        return t;
    // J = prod p_v^{ord_v a}; look for a totally positive alpha in J with
    // ord_v alpha = ord_v J at every bad place, then rescale by 1/alpha.
    FracIdeal J = unit_ideal(ctx);
    for (size_t i = 0; i < bad.size(); ++i)
        J = J * ideal_pow(place_ideal(ctx, bad[i]), ords[i]);
    QuadElem g1 = ctx.from_rat(J.scale * Rat(J.a));
    QuadElem g2 = J.scale * QuadElem::from_omega_coords(Rat(J.b), 1, ctx.D);
    for (long R : {4L, 8L, 16L, 32L, 64L, 128L}) {
        for (long x = -R; x <= R; ++x) {
            for (long y = -R; y <= R; ++y) {
                QuadElem alpha = Rat(x) * g1 + Rat(y) * g2;
                if (alpha.is_zero() || !totally_positive(alpha))
                    continue;
                bool ok = true;
                for (size_t i = 0; i < bad.size(); ++i)
                    if (elem_ord(alpha, bad[i]) != ords[i]) {
                        ok = false;
                        break;
                    }
                if (!ok)
                    continue;
                GTriple out = t;
                out.beta = t.beta / (alpha * alpha);
                out.ideal = t.ideal * ideal_inverse(principal_ideal(ctx, alpha));
                for (auto& v : bad)
                    if (ord_at(out.ideal, v) != 0)
                        throw Error("normalization failed");
                return out;
            }
        }
    }
    throw Error("no normalizing element found");
}

namespace {

// The rho-based construction: D = k u^2 + v^2 with k in {1, 3}, u even,
// rho = (v + sqrt D)/2, a = prod q^(ord_q rho / 2) (times the odd place
// over 3 rounded up when k = 3), 8 beta = sqrt(D) rho.
std::optional<GTriple> rho_construction(const FieldCtx& ctx, int k,
                                        const std::vector<HalfWeight>& weights) {
    Int D(ctx.D);
    std::optional<std::pair<Int, Int>> uv;
    for (Int u = 0; k * u * u <= D; u += 2) {
        Int v;
        if (is_square(D - k * u * u, v)) {
            uv = std::make_pair(u, v);
            break;
        }
    }
    if (!uv)
        return std::nullopt;
    auto [u, v] = *uv;
    if (v % 2 != 1)
        throw Error("rho construction: v must be odd");
    QuadElem rho((Rat(v)) / 2, Rat(1, 2), ctx.D);
    FracIdeal rho_ideal = principal_ideal(ctx, rho);
    FracIdeal a0 = unit_ideal(ctx);
    std::vector<PrimePlace> s3;
    for (auto& [q, e] : factor_ideal(rho_ideal)) {
        if (e % 2 == 0) {
            a0 = a0 * ideal_pow(place_ideal(ctx, q), e / 2);
        } else {
            if (q.q() != 3)
                throw Error("rho construction: odd exponent away from 3");
            a0 = a0 * ideal_pow(place_ideal(ctx, q), (e + 1) / 2);
            s3.push_back(q);
        }
    }
    if (k == 3 && s3.size() != 1)
        throw Error("rho construction: expected one odd place over 3");
    if (k == 1 && !s3.empty())
        throw Error("rho construction: expected a square ideal");
    GTriple t;
    t.beta = Rat(1, 8) * ctx.sqrtD() * rho;
    t.s3 = s3;
    t.ideal = different(ctx) * a0;
    t.weights = weights;
    return normalize_triple(ctx, t);
}

} // namespace

std::optional<GTriple> construct_triple(const FieldCtx& ctx,
                                        const std::vector<HalfWeight>& weights) {
    if (static_cast<int>(weights.size()) != ctx.degree())
        throw Error("weight vector length must equal the degree");
    if (!ctx.two_splits())
        throw Error("no multiplier system of half-integral weight exists: 2 does not split completely");
    if (ctx.D == 0) {
        GTriple t;
        t.weights = weights;
        t.ideal = unit_ideal(ctx);
        if (weights[0] == HalfWeight::Half) {
            t.beta = ctx.from_rat(Rat(1, 24));
            t.s3 = T3_places(ctx); // the place over 3
        } else {
            t.beta = ctx.from_rat(Rat(1, 8));
        }
        if (!is_in_G(ctx, t))
            throw Error("rational triple failed verification");
        return t;
    }
    auto rep = quadratic_criteria(ctx, weights);
    if (!rep.exists)
        return std::nullopt;
    int k = (count_three_halves(weights) % 2 == 0) ? 1 : 3;
    auto t = rho_construction(ctx, k, weights);
    if (!t)
        throw Error("construction failed although the criteria hold");
    if (!is_in_G(ctx, *t))
        throw Error("constructed triple failed verification");
    return t;
}

std::vector<std::vector<PrimePlace>> admissible_s3_sets(const FieldCtx& ctx,
                                                        const std::vector<HalfWeight>& weights) {
    auto t3 = T3_places(ctx);
    int parity = (static_cast<int>(S2_places(ctx).size()) + count_three_halves(weights)) % 2;
    std::vector<std::vector<PrimePlace>> out;
    for (unsigned mask = 0; mask < (1u << t3.size()); ++mask) {
        std::vector<PrimePlace> s3;
        for (size_t i = 0; i < t3.size(); ++i)
            if (mask & (1u << i))
                s3.push_back(t3[i]);
        if ((static_cast<int>(s3.size()) + parity) % 2 == 0)
            out.push_back(std::move(s3));
    }
    return out;
}

std::vector<GTriple> witnesses_for_s3(const FieldCtx& ctx, const ClassGroup& cg,
                                      const std::vector<HalfWeight>& weights,
                                      const std::vector<PrimePlace>& s3) {
    FracIdeal target = different(ctx);
    for (auto& v : s3)
        target = target * place_ideal(ctx, v);
    int tclass = cg.class_of(target); // (8) is narrowly principal
    int kernel = cg.wide_kernel_class();

    std::vector<GTriple> out;
    std::vector<bool> used(cg.size(), false);
    for (int c = 0; c < cg.size(); ++c) {
        if (used[c] || cg.compose(c, c) != tclass)
            continue;
        used[c] = true;
        used[cg.compose(c, kernel)] = true; // same wide class, equivalent triple
        FracIdeal a = cg.class_ideal(c);
        FracIdeal I = (a * a) / (rational_ideal(ctx, 8) * target);
        auto beta = tp_generator(ctx, I);
        if (!beta)
            throw Error("narrowly principal ideal without totally positive generator");
        GTriple t;
        t.beta = *beta;
        t.s3 = s3;
        t.ideal = a;
        t.weights = weights;
        t = normalize_triple(ctx, t);
        if (!is_in_G(ctx, t))
            throw Error("witness failed verification");
        out.push_back(t);
        if (tp_unit_sq_index(ctx) == 2) {
            GTriple t2 = t;
            t2.beta = fundamental_unit(ctx).first * t.beta;
            if (!is_in_G(ctx, t2))
                throw Error("unit twist failed verification");
            out.push_back(t2);
        }
    }
    return out;
}

long equiv_classes(const FieldCtx& ctx, const ClassGroup& cg,
                   const std::vector<HalfWeight>& weights) {
    long total = 0;
    for (auto& s3 : admissible_s3_sets(ctx, weights)) {
        FracIdeal target = different(ctx);
        for (auto& v : s3)
            target = target * place_ideal(ctx, v);
        total += sq_preimage_count(cg, cg.class_of(target));
    }
    return tp_unit_sq_index(ctx) * total;
}

bool triples_equivalent(const FieldCtx& ctx, const GTriple& t1, const GTriple& t2) {
    if (t1.weights != t2.weights)
        return false;
    auto same_s3 = [&] {
        if (t1.s3.size() != t2.s3.size())
            return false;
        for (auto& v : t1.s3) {
            bool found = false;
            for (auto& w : t2.s3)
                if (v == w)
                    found = true;
            if (!found)
                return false;
        }
        return true;
    };
    if (!same_s3())
        return false;
    if (ctx.D == 0) {
        // gamma^2 = beta'/beta with gamma rational
        Rat ratio = t2.beta.x / t1.beta.x;
        Int rn, rd;
        return is_square(numerator(ratio), rn) && is_square(denominator(ratio), rd);
    }
    auto g = any_generator(ctx, t2.ideal / t1.ideal);
    if (!g)
        return false;
    QuadElem u = t2.beta / (t1.beta * *g * *g);
    if (!(principal_ideal(ctx, u) == unit_ideal(ctx)))
        return false;
    if (!totally_positive(u))
        return false;
    // u must be the square of a unit, i.e. an even power of eps
    QuadElem eps2 = fundamental_unit(ctx).first;
    eps2 = eps2 * eps2;
    QuadElem one = ctx.from_rat(1);
    QuadElem x = u;
    int dir = embedding_sign(x - one, 1);
    if (dir == 0)
        return true;
    for (int i = 0; i < 1000; ++i) {
        x = (dir > 0) ? x / eps2 : x * eps2;
        int s = embedding_sign(x - one, 1);
        if (s == 0)
            return true;
        if (s != dir)
            return false; // stepped over 1 without landing on it
    }
    return false;
}

} // namespace hmtheta
