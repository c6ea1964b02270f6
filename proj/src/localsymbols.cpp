#include "hmtheta/localsymbols.hpp"

namespace hmtheta {

using boost::multiprecision::numerator;
using boost::multiprecision::denominator;

SL2Mat make_sl2(QuadElem a, QuadElem b, QuadElem c, QuadElem d) {
    QuadElem det = a * d - b * c;
    if (!(det.x == 1 && det.y == 0))
        throw Error("determinant must be 1");
    return SL2Mat{std::move(a), std::move(b), std::move(c), std::move(d)};
}

SL2Mat make_sl2z(const FieldCtx& ctx, long a, long b, long c, long d) {
    return make_sl2(ctx.from_rat(a), ctx.from_rat(b), ctx.from_rat(c), ctx.from_rat(d));
}

SL2Mat operator*(const SL2Mat& g, const SL2Mat& h) {
    return SL2Mat{g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
                  g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d};
}

SL2Mat sl2_identity(const FieldCtx& ctx) {
    return make_sl2z(ctx, 1, 0, 0, 1);
}

QuadElem x_of(const SL2Mat& g) {
    return g.c.is_zero() ? g.d : g.c;
}

LocalContext LocalContext::real_place(const FieldCtx& ctx, int index) {
    LocalContext l;
    l.D = ctx.D;
    l.real = true;
    l.real_index = index;
    return l;
}

LocalContext LocalContext::finite(const FieldCtx& ctx, const PrimePlace& v) {
    LocalContext l;
    l.D = ctx.D;
    l.real = false;
    l.place = v;
    return l;
}

int jacobi(Int a, Int n) {
    if (n <= 0 || n % 2 == 0)
        throw Error("jacobi needs an odd positive modulus");
    a %= n;
    if (a < 0)
        a += n;
    int t = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            Int r = n % 8;
            if (r == 3 || r == 5)
                t = -t;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3)
            t = -t;
        a %= n;
    }
    return (n == 1) ? t : 0;
}

int jacobi_star(const Int& c, const Int& d, StarVariant variant) {
    if (d % 2 == 0)
        throw Error("starred symbol needs an odd denominator");
    if (c == 0) {
        if (d != 1 && d != -1)
            throw Error("(0/d) is only defined for d = +-1");
        if (variant == StarVariant::Upper)
            return 1;
        return (d == 1) ? 1 : -1;
    }
    int upper = jacobi(c, abs(d));
    if (variant == StarVariant::Upper)
        return upper;
    int t = (c < 0 && d < 0) ? -1 : 1;
    return t * upper;
}

namespace {

// Arithmetic in F_{p^2} = F_p[t]/(minimal polynomial of omega) for inert
// places: t^2 = t + c0 (D = 1 mod 4) or t^2 = D.
struct Fp2 {
    long p;
    long D;
    Int x, y; // x + y t
};

Fp2 fp2_mul(const Fp2& a, const Fp2& b) {
    Int c0 = (a.D % 4 == 1) ? Int(a.D - 1) / 4 : Int(a.D);
    Int x, y;
    Int t2y = a.y * b.y; // coefficient of t^2
    if (a.D % 4 == 1) {
        x = a.x * b.x + t2y * c0;
        y = a.x * b.y + a.y * b.x + t2y;
    } else {
        x = a.x * b.x + t2y * c0;
        y = a.x * b.y + a.y * b.x;
    }
    return Fp2{a.p, a.D, x % a.p, y % a.p};
}

// Quadratic character of F_{p^2}: u^((p^2-1)/2).
int fp2_chi(Fp2 u) {
    Int e = (Int(u.p) * u.p - 1) / 2;
    Fp2 acc{u.p, u.D, 1, 0};
    while (e > 0) {
        if (e % 2 == 1)
            acc = fp2_mul(acc, u);
        u = fp2_mul(u, u);
        e /= 2;
    }
    acc.x %= u.p;
    if (acc.x < 0)
        acc.x += u.p;
    acc.y %= u.p;
    if (acc.y < 0)
        acc.y += u.p;
    if (acc.y != 0)
        throw Error("quadratic character did not land in F_p");
    if (acc.x == 1)
        return 1;
    if (acc.x == u.p - 1)
        return -1;
    throw Error("unexpected character value");
}

// Residue character chi(unit) at an odd finite place.
int tame_chi(const FieldCtx& ctx, const QuadElem& u, const PrimePlace& v) {
    switch (v.kind) {
    case PlaceKind::Rational:
    case PlaceKind::Split:
    case PlaceKind::Ramified: {
        Int r = residue_at(ctx, u, v, 1).value;
        return jacobi(r, Int(v.p));
    }
    case PlaceKind::Inert: {
        // reduce the omega coordinates mod p; the content is a p-unit
        auto [U, V] = u.omega_coords();
        Int l = boost::multiprecision::lcm(denominator(U), denominator(V));
        if (l % v.p == 0)
            throw Error("tame_chi: element not integral at place");
        Int un = numerator(U) * (l / denominator(U)) % v.p;
        Int vn = numerator(V) * (l / denominator(V)) % v.p;
        Int linv = mod_inverse(l % v.p, Int(v.p));
        Fp2 res{v.p, ctx.D, un * linv % v.p, vn * linv % v.p};
        return fp2_chi(res);
    }
    }
    throw Error("unreachable");
}

Rat two_pow(int e) {
    if (e >= 0)
        return Rat(Int(1) << e);
    return Rat(Int(1), Int(1) << (-e));
}

int hilbert_dyadic_q2(const FieldCtx& ctx, const QuadElem& A, const QuadElem& B,
                      const PrimePlace& v) {
    int al = elem_ord(A, v), be = elem_ord(B, v);
    QuadElem u = two_pow(-al) * A;
    QuadElem w = two_pow(-be) * B;
    long ru = residue_at(ctx, u, v, 3).value.convert_to<long>();
    long rw = residue_at(ctx, w, v, 3).value.convert_to<long>();
    long eu = (ru - 1) / 2 % 2, ew = (rw - 1) / 2 % 2;
    long ou = (ru * ru - 1) / 8 % 2, ow = (rw * rw - 1) / 8 % 2;
    long s = eu * ew + al * ow + be * ou;
    return (s % 2 != 0) ? -1 : 1;
}

int hilbert_tame(const FieldCtx& ctx, const QuadElem& A, const QuadElem& B,
                 const PrimePlace& v) {
    int al = elem_ord(A, v), be = elem_ord(B, v);
    // strip the uniformizer: p at split/rational/inert places, sqrt(D) at
    // ramified ones
    QuadElem pi = (v.kind == PlaceKind::Ramified) ? ctx.sqrtD() : ctx.from_rat(v.p);
    auto strip = [&](QuadElem x, int e) {
        while (e > 0) {
            x = x / pi;
            --e;
        }
        while (e < 0) {
            x = x * pi;
            ++e;
        }
        return x;
    };
    QuadElem u = strip(A, al), w = strip(B, be);
    int chi_u = tame_chi(ctx, u, v);
    int chi_w = tame_chi(ctx, w, v);
    long long qv = v.q();
    int chi_m1 = ((qv - 1) / 2 % 2 != 0) ? -1 : 1;
    int r = 1;
    if (al % 2 != 0 && be % 2 != 0)
        r *= chi_m1;
    if (be % 2 != 0)
        r *= chi_u;
    if (al % 2 != 0)
        r *= chi_w;
    return r;
}

} // namespace

int hilbert(const QuadElem& A, const QuadElem& B, const LocalContext& ctx) {
    if (A.is_zero() || B.is_zero())
        throw Error("hilbert symbol needs nonzero arguments");
    if (ctx.real) {
        int sa = embedding_sign(A, ctx.real_index);
        int sb = embedding_sign(B, ctx.real_index);
        return (sa < 0 && sb < 0) ? -1 : 1;
    }
    FieldCtx f{ctx.D};
    const PrimePlace& v = ctx.place;
    if (v.p == 2) {
        if (!v.is_dyadic_q2())
            throw Error("dyadic completions other than Q_2 are not supported");
        return hilbert_dyadic_q2(f, A, B, v);
    }
    return hilbert_tame(f, A, B, v);
}

int splitting_s(const SL2Mat& g, const FieldCtx& ctx, const PrimePlace& v) {
    if (!g.is_integral())
        throw Error("splitting map needs an integral matrix");
    LocalContext l = LocalContext::finite(ctx, v);
    if (g.c.is_zero())
        return hilbert(ctx.from_rat(-1), g.d, l);
    if (elem_ord(g.c, v) == 0)
        return 1;
    return hilbert(g.c, g.d, l);
}

int kubota_cocycle(const SL2Mat& g, const SL2Mat& h, const LocalContext& ctx) {
    SL2Mat gh = g * h;
    QuadElem xg = x_of(g), xh = x_of(h), xgh = x_of(gh);
    return hilbert(xg * xgh, xh * xgh, ctx);
}

int v0(const FieldCtx& ctx, const SL2Mat& g) {
    if (!g.is_integral())
        throw Error("v0 needs an integral matrix");
    if (ctx.D != 0 && !ctx.two_splits())
        throw Error("no multiplier system of half-integral weight exists: 2 does not split completely");
    int r = 1;
    if (g.c.is_zero()) {
        for (auto& v : S2_places(ctx))
            r *= hilbert(ctx.from_rat(-1), g.d, LocalContext::finite(ctx, v));
        return r;
    }
    for (auto& [v, e] : factor_ideal(principal_ideal(ctx, g.c), factor_no_bound)) {
        (void)e;
        r *= splitting_s(g, ctx, v);
    }
    return r;
}

int min_unit_sq_val(const FieldCtx& ctx, const PrimePlace& v) {
    long p = v.p;
    int K = (p == 2) ? 5 : (p == 3 ? 3 : 1);
    Int pK = 1;
    for (int i = 0; i < K; ++i)
        pK *= p;
    int cap = v.e * K;
    int best = cap;
    long range = static_cast<long>(pK);
    bool quadratic_scan = (ctx.D != 0 && v.kind != PlaceKind::Rational);
    for (long uu = 0; uu < range; ++uu) {
        long vmax = quadratic_scan ? range : 1;
        for (long vv = 0; vv < vmax; ++vv) {
            QuadElem a = quadratic_scan
                             ? QuadElem::from_omega_coords(uu, vv, ctx.D)
                             : ctx.from_rat(uu);
            if (a.is_zero())
                continue;
            if (elem_ord(a, v) != 0)
                continue;
            QuadElem t = a * a - ctx.from_rat(1);
            if (t.is_zero())
                continue;
            int o = elem_ord(t, v);
            if (o < best)
                best = o;
            if (best == 0)
                return 0;
        }
    }
    if (best >= cap)
        throw Error("min_unit_sq_val: scan precision exhausted");
    return best;
}

} // namespace hmtheta
