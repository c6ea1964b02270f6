#pragma once

#include "hmtheta/quadfield.hpp"

namespace hmtheta {

// Element of SL_2 over F with exact entries.
struct SL2Mat {
    QuadElem a, b, c, d;

    bool is_integral() const {
        return a.is_integral() && b.is_integral() && c.is_integral() && d.is_integral();
    }
    friend bool operator==(const SL2Mat&, const SL2Mat&) = default;
};

SL2Mat make_sl2(QuadElem a, QuadElem b, QuadElem c, QuadElem d); // checks det = 1
SL2Mat make_sl2z(const FieldCtx& ctx, long a, long b, long c, long d);
SL2Mat operator*(const SL2Mat& g, const SL2Mat& h);
SL2Mat sl2_identity(const FieldCtx& ctx);

// x(g) = c if c != 0, else d.
QuadElem x_of(const SL2Mat& g);

// A completion of F: a real embedding or a finite place.
struct LocalContext {
    long D = 0;
    bool real = false;
    int real_index = 1;
    PrimePlace place;

    static LocalContext real_place(const FieldCtx& ctx, int index);
    static LocalContext finite(const FieldCtx& ctx, const PrimePlace& v);
    long long q() const { return real ? 0 : place.q(); }
};

// Jacobi symbol (a/n) for odd positive n, 0 on a common factor.
int jacobi(Int a, Int n);

// (c/d)^* = (c/|d|) and (c/d)_* = t(c,d) (c/d)^* with t = -1 iff c,d < 0,
// plus the conventions (0/1)^* = (0/-1)^* = (0/1)_* = 1, (0/-1)_* = -1.
enum class StarVariant { Upper, Lower };
int jacobi_star(const Int& c, const Int& d, StarVariant variant);

// Quadratic Hilbert symbol of the completion.  Throws on zero arguments and
// on dyadic completions other than Q_2.
int hilbert(const QuadElem& a, const QuadElem& b, const LocalContext& ctx);

// The splitting map s on SL_2(o_v): 1 if c is a unit, <c,d> if 0 < ord c,
// <-1,d> if c = 0.
int splitting_s(const SL2Mat& g, const FieldCtx& ctx, const PrimePlace& v);

// Kubota 2-cocycle c(g,h) = <x(g)x(gh), x(h)x(gh)> at the given place.
int kubota_cocycle(const SL2Mat& g, const SL2Mat& h, const LocalContext& ctx);

// v_0(g) = prod over finite places of s_v(g); all but finitely many factors
// are 1 (places dividing c, and the dyadic places when c = 0).
int v0(const FieldCtx& ctx, const SL2Mat& g);

// min{ord(a^2 - 1) : a unit} of the completion, by exhaustive residue scan.
int min_unit_sq_val(const FieldCtx& ctx, const PrimePlace& v);

} // namespace hmtheta
