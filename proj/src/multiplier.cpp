#include "hmtheta/multiplier.hpp"

#include <cmath>

namespace hmtheta {

using boost::multiprecision::numerator;
using boost::multiprecision::denominator;

Rat UnitRoot::reduce(Rat e) {
    Int n = numerator(e), d = denominator(e);
    Int r = n % d;
    if (r < 0)
        r += d;
    return Rat(r, d);
}

std::complex<double> UnitRoot::value() const {
    double t = 2.0 * M_PI * static_cast<double>(r);
    return {std::cos(t), std::sin(t)};
}

UnitRoot psi_local(const FieldCtx& ctx, const QuadElem& beta, const QuadElem& x,
                   const PrimePlace& v) {
    if (v.f != 1)
        throw Error("no degree-one place");
    QuadElem t = beta * x;
    if (t.is_zero())
        return UnitRoot::one();
    long p = v.p;
    Rat frac;
    if (v.kind == PlaceKind::Ramified) {
        // F_v is the unique completion over p, so the local trace of a
        // global element is its global trace.
        frac = padic_frac(t.trace(), p);
    } else {
        int o = elem_ord(t, v);
        if (o >= 0)
            return UnitRoot::one();
        int m = -o;
        Int pm = 1;
        for (int i = 0; i < m; ++i)
            pm *= p;
        QuadElem shifted = Rat(pm) * t;
        Int r = residue_at(ctx, shifted, v, m).value;
        frac = Rat(r, pm);
    }
    return UnitRoot(-frac);
}

UnitRoot kappa_v(const MultiplierSpec& spec, const SL2Mat& g, const PrimePlace& v) {
    const FieldCtx& ctx = spec.ctx;
    const QuadElem& beta = spec.triple.beta;
    const QuadElem &a = g.a, &b = g.b, &c = g.c, &d = g.d;
    if (v.is_dyadic_q2()) {
        QuadElem three = ctx.from_rat(3);
        bool c_unit = !c.is_zero() && residue_at(ctx, c, v, 1).value == 1;
        QuadElem arg = c_unit ? (-(a + d) * c + three * c)
                              : ((c - b) * d - three * (d - ctx.from_rat(1)));
        return psi_local(ctx, beta, arg, v);
    }
    bool in_s3 = false;
    for (auto& w : spec.triple.s3)
        if (w == v)
            in_s3 = true;
    if (!in_s3 || v.q() != 3)
        throw Error("kappa_v only defined on S2 and S3");
    QuadElem arg = -(a + d) * c + b * d * (c * c - ctx.from_rat(1));
    return psi_local(ctx, beta, arg, v);
}

UnitRoot v_lambda(const MultiplierSpec& spec, const SL2Mat& g) {
    const FieldCtx& ctx = spec.ctx;
    UnitRoot r = UnitRoot::sign(v0(ctx, g));
    for (auto& v : S2_places(ctx))
        r = r * kappa_v(spec, g, v);
    for (auto& v : spec.triple.s3)
        r = r * kappa_v(spec, g, v);
    return r;
}

UnitRoot v_eta(const SL2Mat& g) {
    auto as_int = [](const QuadElem& e) {
        if (!e.y.is_zero() || denominator(e.x) != 1)
            throw Error("v_eta needs an SL_2(Z) matrix");
        return numerator(e.x);
    };
    Int a = as_int(g.a), b = as_int(g.b), c = as_int(g.c), d = as_int(g.d);
    int sign;
    Rat e;
    if (c % 2 != 0) {
        sign = jacobi_star(d, c, StarVariant::Upper);
        e = Rat((a + d) * c - b * d * (c * c - 1) - 3 * c, 24);
    } else {
        sign = jacobi_star(c, d, StarVariant::Lower);
        e = Rat((a + d) * c - b * d * (c * c - 1) + 3 * d - 3 - 3 * c * d, 24);
    }
    return UnitRoot::sign(sign) * UnitRoot(e);
}

int c_infinity(const FieldCtx& ctx, const SL2Mat& g1, const SL2Mat& g2) {
    SL2Mat g12 = g1 * g2;
    QuadElem u = x_of(g1) * x_of(g12);
    QuadElem w = x_of(g2) * x_of(g12);
    int r = 1;
    for (int i = 1; i <= ctx.degree(); ++i)
        if (embedding_sign(u, i) < 0 && embedding_sign(w, i) < 0)
            r = -r;
    return r;
}

bool cocycle_check(const FieldCtx& ctx, const std::function<UnitRoot(const SL2Mat&)>& v,
                   const SL2Mat& g1, const SL2Mat& g2) {
    UnitRoot lhs = v(g1) * v(g2);
    UnitRoot rhs = UnitRoot::sign(c_infinity(ctx, g1, g2)) * v(g1 * g2);
    return lhs == rhs;
}

std::complex<double> automorphy_J(const SL2Mat& g, int place, std::complex<double> z) {
    if (z.imag() <= 0)
        throw Error("point must lie in the upper half plane");
    if (g.c.is_zero()) {
        double d = g.d.embed(place);
        // -sqrt(d) below means -i sqrt(|d|): the square must equal d
        if (d > 0)
            return {std::sqrt(d), 0.0};
        return {0.0, -std::sqrt(-d)};
    }
    std::complex<double> w = g.c.embed(place) * z + g.d.embed(place);
    return std::sqrt(w); // principal branch: arg in (-pi, pi]
}

} // namespace hmtheta
