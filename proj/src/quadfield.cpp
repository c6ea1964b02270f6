#include "hmtheta/quadfield.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace hmtheta {

using boost::multiprecision::numerator;
using boost::multiprecision::denominator;
using boost::multiprecision::gcd;
using boost::multiprecision::lcm;
using boost::multiprecision::msb;

// --- FieldCtx ---------------------------------------------------------------

FieldCtx FieldCtx::quadratic(long D) {
    if (D <= 1)
        throw Error("quadratic field needs D > 1");
    for (auto [p, e] : factor_trial(Int(D)))
        if (e >= 2)
            throw Error("D must be square-free");
    return FieldCtx{D};
}

Int FieldCtx::disc() const {
    if (D == 0)
        return 1;
    return ((D % 4) == 1) ? Int(D) : Int(4) * D;
}

bool FieldCtx::two_splits() const {
    if (D == 0)
        return true;
    return D % 8 == 1;
}

QuadElem FieldCtx::omega() const {
    if (D == 0)
        return QuadElem(0, 0, 0);
    if (D % 4 == 1)
        return QuadElem(Rat(1, 2), Rat(1, 2), D);
    return QuadElem(0, 1, D);
}

QuadElem FieldCtx::sqrtD() const {
    if (D == 0)
        throw Error("sqrtD over Q");
    return QuadElem(0, 1, D);
}

bool PrimePlace::is_dyadic_q2() const {
    return p == 2 && f == 1 && e == 1;
}

// --- module HNF -------------------------------------------------------------

namespace {

// omega^2 = omega + c0(D) for D = 1 mod 4, omega^2 = c0(D) otherwise.
Int omega_sq_const(long D) {
    return (D % 4 == 1) ? Int(D - 1) / 4 : Int(D);
}

bool omega_sq_has_omega(long D) {
    return D % 4 == 1;
}

// N(u + v*omega) as integers.
Int omega_norm(long D, const Int& u, const Int& v) {
    if (D % 4 == 1)
        return u * u + u * v - v * v * omega_sq_const(D);
    return u * u - v * v * D;
}

// HNF of the Z-module generated by vectors (u_i, v_i) in the basis (1, omega).
// Returns (A, X, C): module = A*Z + (X + C*omega)*Z with C | A, C | X assumed
// checked by the caller when an ideal is expected.
struct Hnf2 {
    Int A, X, C;
};

Hnf2 hnf2(std::vector<std::pair<Int, Int>> vecs) {
    Int C = 0, X = 0;
    std::vector<Int> pure;
    for (auto& [u, v] : vecs) {
        if (v == 0) {
            pure.push_back(u);
            continue;
        }
        if (C == 0) {
            C = v;
            X = u;
            continue;
        }
        Int s, t;
        Int g = egcd(C, v, s, t);
        Int newX = s * X + t * u;
        pure.push_back((v / g) * X - (C / g) * u);
        C = g;
        X = newX;
    }
    if (C < 0) {
        C = -C;
        X = -X;
    }
    Int A = 0;
    for (auto& u : pure)
        A = gcd(A, u);
    if (A == 0 || C == 0)
        throw Error("degenerate module");
    X %= A;
    if (X < 0)
        X += A;
    return {A, X, C};
}

FracIdeal make_ideal(long D, Rat scale, const Hnf2& h) {
    if (h.A % h.C != 0 || h.X % h.C != 0)
        throw Error("module is not an ideal");
    Int a = h.A / h.C;
    Int b = h.X / h.C;
    b %= a;
    if (b < 0)
        b += a;
    if (omega_norm(D, b, 1) % a != 0)
        throw Error("module is not an ideal");
    FracIdeal out;
    out.D = D;
    out.scale = scale * Rat(h.C);
    out.a = a;
    out.b = b;
    if (out.scale <= 0)
        throw Error("ideal scale must be positive");
    return out;
}

// Pull the rational content out of a nonzero element: g = q * (u + v*omega)
// with gcd(u, v) = 1, q > 0.
void primitive_part(const QuadElem& g, Rat& q, Int& u, Int& v) {
    if (g.is_zero())
        throw Error("zero element");
    auto [U, V] = g.omega_coords();
    Int l = lcm(denominator(U), denominator(V));
    Int un = numerator(U) * (l / denominator(U));
    Int vn = numerator(V) * (l / denominator(V));
    Int c = gcd(un, vn);
    q = Rat(c, l);
    u = un / c;
    v = vn / c;
}

} // namespace

// --- basic ideals -----------------------------------------------------------

FracIdeal unit_ideal(const FieldCtx& ctx) {
    return FracIdeal{ctx.D, 1, 1, 0};
}

FracIdeal rational_ideal(const FieldCtx& ctx, const Rat& q) {
    if (q == 0)
        throw Error("zero ideal");
    return FracIdeal{ctx.D, abs(q), 1, 0};
}

FracIdeal principal_ideal(const FieldCtx& ctx, const QuadElem& g) {
    if (g.is_zero())
        throw Error("zero ideal");
    if (ctx.D == 0)
        return rational_ideal(ctx, g.x);
    Rat q;
    Int u, v;
    primitive_part(g, q, u, v);
    // Z-generators g, g*omega.
    Int c0 = omega_sq_const(ctx.D);
    std::vector<std::pair<Int, Int>> vecs;
    vecs.emplace_back(u, v);
    if (omega_sq_has_omega(ctx.D))
        vecs.emplace_back(v * c0, u + v);
    else
        vecs.emplace_back(v * c0, u);
    return make_ideal(ctx.D, q, hnf2(std::move(vecs)));
}

FracIdeal place_ideal(const FieldCtx& ctx, const PrimePlace& v) {
    return FracIdeal{ctx.D, v.iscale, v.ia, v.ib};
}

FracIdeal operator*(const FracIdeal& A, const FracIdeal& B) {
    if (A.D != B.D)
        throw Error("mixed field contexts");
    if (A.D == 0)
        return FracIdeal{0, A.scale * B.scale, 1, 0};
    long D = A.D;
    Int c0 = omega_sq_const(D);
    std::vector<std::pair<Int, Int>> vecs;
    vecs.emplace_back(A.a * B.a, 0);
    vecs.emplace_back(A.a * B.b, A.a);
    vecs.emplace_back(B.a * A.b, B.a);
    // (b1+omega)(b2+omega)
    if (omega_sq_has_omega(D))
        vecs.emplace_back(A.b * B.b + c0, A.b + B.b + 1);
    else
        vecs.emplace_back(A.b * B.b + c0, A.b + B.b);
    return make_ideal(D, A.scale * B.scale, hnf2(std::move(vecs)));
}

FracIdeal ideal_conj(const FracIdeal& A) {
    if (A.D == 0)
        return A;
    Int b;
    if (omega_sq_has_omega(A.D))
        b = (-A.b - 1) % A.a; // sigma(omega) = 1 - omega
    else
        b = (-A.b) % A.a;
    if (b < 0)
        b += A.a;
    return FracIdeal{A.D, A.scale, A.a, b};
}

FracIdeal ideal_inverse(const FracIdeal& A) {
    if (A.D == 0)
        return FracIdeal{0, 1 / A.scale, 1, 0};
    FracIdeal c = ideal_conj(A);
    c.scale = 1 / (A.scale * Rat(A.a));
    return c;
}

FracIdeal operator/(const FracIdeal& a, const FracIdeal& b) {
    return a * ideal_inverse(b);
}

FracIdeal ideal_pow(const FracIdeal& a, long n) {
    FieldCtx ctx{a.D};
    if (n == 0)
        return unit_ideal(ctx);
    FracIdeal base = (n > 0) ? a : ideal_inverse(a);
    unsigned long m = (n > 0) ? n : -n;
    FracIdeal acc = unit_ideal(ctx);
    while (m) {
        if (m & 1)
            acc = acc * base;
        base = base * base;
        m >>= 1;
    }
    return acc;
}

Rat ideal_norm(const FracIdeal& a) {
    return a.scale * a.scale * Rat(a.a);
}

bool ideal_is_integral(const FracIdeal& a) {
    if (a.D == 0)
        return denominator(a.scale) == 1;
    // integral iff both generators are integral
    return denominator(a.scale * Rat(a.a)) == 1 && denominator(a.scale) == 1;
}

bool ideal_contains(const FracIdeal& A, const QuadElem& x) {
    if (x.is_zero())
        return true;
    auto [U, V] = x.omega_coords();
    Rat u = U / A.scale, v = V / A.scale;
    if (denominator(v) != 1 || denominator(u) != 1)
        return false;
    Int vi = numerator(v), ui = numerator(u);
    // x/scale = s*(b+omega) + t*a  with s = vi
    return (ui - vi * A.b) % A.a == 0;
}

FracIdeal different(const FieldCtx& ctx) {
    if (ctx.D == 0)
        return unit_ideal(ctx);
    if (ctx.D % 4 == 1)
        return principal_ideal(ctx, ctx.sqrtD());
    return principal_ideal(ctx, 2 * Rat(1) * ctx.sqrtD()); // (sqrt(4D)) = (2 sqrt D)
}

// --- places -----------------------------------------------------------------

std::vector<PrimePlace> primes_above(const FieldCtx& ctx, long p) {
    if (p < 2)
        throw Error("not a prime");
    if (ctx.D == 0) {
        PrimePlace v;
        v.p = p;
        v.kind = PlaceKind::Rational;
        v.ia = 1;
        v.ib = 0;
        v.iscale = p;
        return {v};
    }
    long D = ctx.D;
    Int dK = ctx.disc();
    auto split_place = [&](int label) {
        PrimePlace v;
        v.p = p;
        v.kind = PlaceKind::Split;
        v.f = 1;
        v.e = 1;
        v.label = label;
        Int r = hensel_root(D, p, 1, label).value;
        // (p, omega - r): HNF (p, (-r) mod p)
        v.ia = p;
        v.ib = (-r) % p;
        if (v.ib < 0)
            v.ib += p;
        v.iscale = 1;
        return v;
    };
    if (p == 2) {
        if (D % 8 == 1)
            return {split_place(1), split_place(2)};
        if (D % 4 == 1) {
            PrimePlace v;
            v.p = 2;
            v.kind = PlaceKind::Inert;
            v.f = 2;
            v.ia = 1;
            v.ib = 0;
            v.iscale = 2;
            return {v};
        }
        // D = 2, 3 mod 4: 2 ramifies, p_2 = (2, sqrt D) or (2, 1 + sqrt D)
        PrimePlace v;
        v.p = 2;
        v.kind = PlaceKind::Ramified;
        v.e = 2;
        v.ia = 2;
        v.ib = (D % 4 == 2) ? 0 : 1;
        v.iscale = 1;
        return {v};
    }
    if (dK % p == 0) {
        PrimePlace v;
        v.p = p;
        v.kind = PlaceKind::Ramified;
        v.e = 2;
        // (p, sqrt D); omega = (1 + sqrt D)/2 = (p+1)/2 mod p for D = 1 mod 4
        v.ia = p;
        if (D % 4 == 1) {
            Int r = Int(p + 1) / 2;
            v.ib = (p - r % p) % p;
        } else {
            v.ib = 0;
        }
        v.iscale = 1;
        return {v};
    }
    Int dm = dK % p;
    if (pow_mod(dm, (Int(p) - 1) / 2, p) == 1)
        return {split_place(1), split_place(2)};
    PrimePlace v;
    v.p = p;
    v.kind = PlaceKind::Inert;
    v.f = 2;
    v.ia = 1;
    v.ib = 0;
    v.iscale = p;
    return {v};
}

std::vector<PrimePlace> S2_places(const FieldCtx& ctx) {
    std::vector<PrimePlace> out;
    for (auto& v : primes_above(ctx, 2))
        if (v.is_dyadic_q2())
            out.push_back(v);
    return out;
}

std::vector<PrimePlace> T3_places(const FieldCtx& ctx) {
    std::vector<PrimePlace> out;
    for (auto& v : primes_above(ctx, 3))
        if (v.q() == 3)
            out.push_back(v);
    return out;
}

// --- valuations ---------------------------------------------------------------

namespace {

// Valuation of a primitive integral element u + v*omega (gcd(u,v) = 1).
int primitive_ord(long D, const Int& u, const Int& v, const PrimePlace& pl) {
    switch (pl.kind) {
    case PlaceKind::Rational:
        throw Error("primitive_ord: rational place");
    case PlaceKind::Inert:
        return 0; // nonzero residue in F_{p^2}
    case PlaceKind::Ramified: {
        Int n = omega_norm(D, u, v);
        return ord_p(n, pl.p);
    }
    case PlaceKind::Split: {
        Int n = omega_norm(D, u, v);
        int m = (n % pl.p == 0) ? ord_p(n, pl.p) : 0;
        if (m == 0)
            return 0;
        PadicResidue r = hensel_root(D, pl.p, m + 1, pl.label);
        Int pk = 1;
        for (int i = 0; i < m + 1; ++i)
            pk *= pl.p;
        Int t = (u + v * r.value) % pk;
        if (t < 0)
            t += pk;
        if (t == 0)
            throw Error("primitive_ord: precision exhausted");
        return std::min(ord_p(t, pl.p), m);
    }
    }
    throw Error("unreachable");
}

} // namespace

int elem_ord(const QuadElem& x, const PrimePlace& v) {
    if (x.is_zero())
        throw Error("valuation of zero");
    if (x.D == 0)
        return ord_p(x.x, v.p);
    Rat q;
    Int u, w;
    primitive_part(x, q, u, w);
    int base = (q == 1) ? 0 : ord_p(q, v.p);
    return v.e * base + primitive_ord(x.D, u, w, v);
}

int ord_at(const FracIdeal& A, const PrimePlace& v) {
    if (A.D == 0)
        return ord_p(A.scale, v.p);
    int base = (A.scale == 1) ? 0 : v.e * ord_p(A.scale, v.p);
    int o1 = elem_ord(QuadElem::from_omega_coords(Rat(A.a), 0, A.D), v);
    int o2 = elem_ord(QuadElem::from_omega_coords(Rat(A.b), 1, A.D), v);
    return base + std::min(o1, o2);
}

std::vector<std::pair<PrimePlace, int>> factor_ideal(const FracIdeal& A, long bound) {
    FieldCtx ctx{A.D};
    // the support is visible in the scale and the module index a (the norm
    // alone can hide conjugate pairs, e.g. a split prime over its conjugate)
    Int support = numerator(A.scale) * denominator(A.scale) * A.a;
    std::vector<std::pair<PrimePlace, int>> out;
    for (auto [p, e] : factor_trial(support, bound)) {
        (void)e;
        for (auto& v : primes_above(ctx, p)) {
            int o = ord_at(A, v);
            if (o != 0)
                out.emplace_back(v, o);
        }
    }
    return out;
}

std::optional<FracIdeal> ideal_sqrt(const FracIdeal& A, long bound) {
    FieldCtx ctx{A.D};
    auto fac = factor_ideal(A, bound);
    FracIdeal r = unit_ideal(ctx);
    for (auto& [v, e] : fac) {
        if (e % 2)
            return std::nullopt;
        r = r * ideal_pow(place_ideal(ctx, v), e / 2);
    }
    if (!(r * r == A))
        throw Error("ideal_sqrt: reassembly failed");
    return r;
}

// --- units ---------------------------------------------------------------------

std::pair<QuadElem, int> fundamental_unit(const FieldCtx& ctx) {
    if (ctx.D == 0)
        throw Error("fundamental unit needs a quadratic field");
    long D = ctx.D;
    // Continued fraction of omega = (P0 + sqrt D)/Q0.
    Int P = (D % 4 == 1) ? 1 : 0;
    Int Q = (D % 4 == 1) ? 2 : 1;
    Int s = isqrt_floor(Int(D));
    std::map<std::pair<Int, Int>, int> seen;
    std::vector<Int> quots;
    int k = 0;
    while (true) {
        Int a = (P + s) / Q;
        auto key = std::make_pair(P, Q);
        auto it = seen.find(key);
        if (it != seen.end() && k >= 1) {
            int j = it->second;
            // automorph of alpha_j over the period: eps = q*alpha_j + q'
            Int p1 = 1, p0 = 0, q1 = 0, q0 = 1;
            for (size_t i = j; i < quots.size(); ++i) {
                Int np = quots[i] * p1 + p0;
                Int nq = quots[i] * q1 + q0;
                p0 = p1; p1 = np;
                q0 = q1; q1 = nq;
            }
            Rat Pj(key.first), Qj(key.second);
            QuadElem eps((Rat(q1) * Pj + Rat(q0) * Qj) / Qj, Rat(q1) / Qj, D);
            if (!eps.is_integral())
                throw Error("fundamental unit: not integral");
            Rat n = eps.norm();
            if (n != 1 && n != -1)
                throw Error("fundamental unit: norm check failed");
            if (embedding_sign(eps, 1) < 0)
                eps = -eps;
            // the cycle automorph satisfies eps > 1 by construction
            if (embedding_sign(eps - ctx.from_rat(1), 1) <= 0)
                throw Error("fundamental unit: not > 1");
            return {eps, n == 1 ? 1 : -1};
        }
        seen[key] = k;
        quots.push_back(a);
        Int P1 = a * Q - P;
        Int Q1 = (D - P1 * P1) / Q;
        if ((Int(D) - P1 * P1) % Q != 0)
            throw Error("continued fraction invariant broken");
        P = P1;
        Q = Q1;
        ++k;
    }
}

int tp_unit_sq_index(const FieldCtx& ctx) {
    if (ctx.D == 0)
        return 1;
    return fundamental_unit(ctx).second == 1 ? 2 : 1;
}

// --- generator search ------------------------------------------------------------

namespace {

double log_of_int(const Int& n) {
    if (n == 0)
        return -1e300;
    double d = static_cast<double>(abs(n));
    if (std::isfinite(d) && d > 0)
        return std::log(d);
    return static_cast<double>(msb(abs(n))) * std::log(2.0);
}

double log_of_rat(const Rat& r) {
    return log_of_int(numerator(r)) - log_of_int(denominator(r));
}

// log of the first embedding of a totally positive-ish value x + y sqrt(D),
// accurate enough for search bounds.
double log_embed1(const QuadElem& g) {
    double lx = g.x == 0 ? -1e300 : log_of_rat(abs(g.x));
    double ly = g.y == 0 ? -1e300 : log_of_rat(abs(g.y)) + 0.5 * std::log((double)g.D);
    double m = std::max(lx, ly);
    return m + std::log(std::exp(lx - m) * (g.x < 0 ? -1 : 1) + std::exp(ly - m) * (g.y < 0 ? -1 : 1));
}

std::optional<QuadElem> generator_search(const FieldCtx& ctx, const FracIdeal& A,
                                         bool require_tp) {
    if (ctx.D == 0) {
        // scale > 0 is already totally positive
        return ctx.from_rat(A.scale);
    }
    long D = ctx.D;
    auto [eps, neps] = fundamental_unit(ctx);
    double log_eps1 = log_embed1(eps);
    // Some generator (if any) satisfies |iota_i(h)| <= sqrt(a * eps_1) at both
    // embeddings after scaling by a power of eps.
    double logB = 0.5 * (log_of_int(A.a) + log_eps1);
    double log_ymax = logB + std::log(2.0) - 0.5 * std::log((double)D);
    if (log_ymax > std::log(5e7))
        throw Error("generator search range too large");
    long ymax = (long)std::ceil(std::exp(log_ymax)) + 1;
    FracIdeal module{D, 1, A.a, A.b};

    auto try_element = [&](const Int& U, const Int& V) -> std::optional<QuadElem> {
        if (U == 0 && V == 0)
            return std::nullopt;
        // membership: U = x*a + V*b for integer x
        if ((U - V * A.b) % A.a != 0)
            return std::nullopt;
        QuadElem h = QuadElem::from_omega_coords(Rat(U), Rat(V), D);
        if (!(principal_ideal(ctx, h) == module))
            return std::nullopt;
        if (!require_tp) {
            if (embedding_sign(h, 1) < 0)
                h = -h;
            return A.scale * h;
        }
        int s1 = embedding_sign(h, 1), s2 = embedding_sign(h, 2);
        if (s1 == s2)
            return A.scale * (s1 > 0 ? h : -h);
        if (neps == -1) {
            QuadElem he = h * eps;
            if (totally_positive(he))
                return A.scale * he;
            he = -he;
            if (!totally_positive(he))
                throw Error("sign adjustment failed");
            return A.scale * he;
        }
        return std::nullopt; // mixed signs, eps totally positive: no tp generator
    };

    // Solve |N(U + y*omega)| = a per y: U quadratic with discriminant
    // y^2 D + 4a (D = 1 mod 4) resp. U^2 = y^2 D + a (otherwise).
    for (long y = 0; y <= ymax; ++y) {
        Int yD = Int(y) * y * D;
        for (int sgn = 0; sgn < 2; ++sgn) {
            Int na = (sgn == 0) ? Int(A.a) : Int(-A.a);
            Int disc = (D % 4 == 1) ? Int(yD + 4 * na) : Int(yD + na);
            Int root;
            if (disc < 0 || !is_square(disc, root))
                continue;
            for (int rs = 0; rs < 2; ++rs) {
                Int rr = (rs == 0) ? root : -root;
                Int U;
                if (D % 4 == 1) {
                    if (((rr - y) % 2 + 2) % 2 != 0)
                        continue;
                    U = (rr - y) / 2;
                } else {
                    U = rr;
                }
                if (omega_norm(D, U, Int(y)) != na)
                    continue;
                if (auto g = try_element(U, Int(y)))
                    return g;
                if (rr == 0)
                    break;
            }
        }
    }
    return std::nullopt;
}

} // namespace

std::optional<QuadElem> any_generator(const FieldCtx& ctx, const FracIdeal& a) {
    return generator_search(ctx, a, false);
}

std::optional<QuadElem> tp_generator(const FieldCtx& ctx, const FracIdeal& a) {
    return generator_search(ctx, a, true);
}

// --- residues -----------------------------------------------------------------

PadicResidue residue_at(const FieldCtx& ctx, const QuadElem& x, const PrimePlace& v, int k) {
    if (k < 1)
        throw Error("residue precision must be >= 1");
    long p = v.p;
    Int pk = 1;
    for (int i = 0; i < k; ++i)
        pk *= p;
    if (x.is_zero())
        return PadicResidue{p, k, 0};
    if (v.kind == PlaceKind::Inert)
        throw Error("no degree-one place");
    if (elem_ord(x, v) < 0)
        throw Error("negative valuation at place");
    if (ctx.D == 0 || x.D == 0) {
        // rational reduction with p-unit denominator
        Int num = numerator(x.x), den = denominator(x.x);
        Int r = num % pk * mod_inverse(den % pk, pk) % pk;
        if (r < 0)
            r += pk;
        return PadicResidue{p, k, r};
    }
    if (v.kind == PlaceKind::Ramified) {
        if (p == 2)
            throw Error("no degree-one place"); // F_v != Q_2
        if (k > 1)
            throw Error("ramified residues only supported mod p");
        auto [U, V] = x.omega_coords();
        // sqrt D = 0 mod p_v, so omega = (p+1)/2 mod p when D = 1 mod 4
        Int ow = (ctx.D % 4 == 1) ? Int(p + 1) / 2 : Int(0);
        Rat val = U + V * Rat(ow);
        Int num = numerator(val), den = denominator(val);
        if (den % p == 0)
            throw Error("negative valuation at place");
        Int r = num % p * mod_inverse(den % p, p) % p;
        if (r < 0)
            r += p;
        return PadicResidue{p, k, r};
    }
    // split place: substitute the Hensel root for omega, with enough slack
    // to absorb p-powers in the denominator of the content.
    Rat q;
    Int u, w;
    primitive_part(x, q, u, w);
    Int num = numerator(q), den = denominator(q);
    int dv = ord_p(den, p);
    Int dshift = 1;
    for (int i = 0; i < dv; ++i)
        dshift *= p;
    Int pkj = pk * dshift;
    PadicResidue root = hensel_root(ctx.D, p, k + dv, v.label);
    Int t = (u + w * root.value) % pkj;
    t = t * (num % pkj) % pkj * mod_inverse(den / dshift % pkj, pkj) % pkj;
    if (t < 0)
        t += pkj;
    if (t % dshift != 0)
        throw Error("negative valuation at place");
    t /= dshift;
    t %= pk;
    if (t < 0)
        t += pk;
    return PadicResidue{p, k, t};
}

std::string to_string(const FracIdeal& a) {
    std::ostringstream os;
    os << to_string(a.scale) << "*(" << a.a << ", " << a.b << "+w)";
    return os.str();
}

} // namespace hmtheta
