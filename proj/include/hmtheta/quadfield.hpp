#pragma once

#include "hmtheta/arith.hpp"

#include <optional>
#include <vector>

namespace hmtheta {

// Field context: Q (D = 0) or the real quadratic field Q(sqrt D) with D > 1
// square-free.  The ring of integers is Z resp. Z[omega] with
// omega = (1+sqrt D)/2 when D = 1 mod 4 and omega = sqrt D otherwise.
struct FieldCtx {
    long D = 0;

    static FieldCtx rationals() { return FieldCtx{0}; }
    static FieldCtx quadratic(long D); // validates D > 1 square-free

    int degree() const { return D ? 2 : 1; }
    Int disc() const;
    bool two_splits() const; // 2 splits completely (trivially true over Q)
    QuadElem omega() const;
    QuadElem sqrtD() const;
    QuadElem elem(const Rat& x, const Rat& y) const { return QuadElem(x, y, D); }
    QuadElem from_rat(const Rat& r) const { return QuadElem(r, 0, D); }

    friend bool operator==(const FieldCtx&, const FieldCtx&) = default;
};

enum class PlaceKind { Rational, Split, Inert, Ramified };

// A finite place of F.  For split places, label 1 corresponds to the Hensel
// lift of the smaller residue of omega mod p (see hensel_root), label 2 to
// the other root.  ia, ib hold the HNF module data of the prime ideal
// (ia*Z + (ib+omega)*Z scaled by iscale).
struct PrimePlace {
    long p = 0;
    PlaceKind kind = PlaceKind::Rational;
    int f = 1;
    int e = 1;
    int label = 1;
    Int ia = 1, ib = 0;
    Rat iscale = 1;

    long long q() const { return f == 2 ? (long long)p * p : p; }
    bool is_dyadic_q2() const; // completion equals Q_2

    friend bool operator==(const PrimePlace& a, const PrimePlace& b) {
        return a.p == b.p && a.kind == b.kind && a.label == b.label;
    }
};

// Fractional ideal scale * (a*Z + (b+omega)*Z) with a >= 1, 0 <= b < a,
// scale a positive rational.  Over Q the module part is fixed to Z.
struct FracIdeal {
    long D = 0;
    Rat scale = 1;
    Int a = 1;
    Int b = 0;

    friend bool operator==(const FracIdeal&, const FracIdeal&) = default;
};

enum class HalfWeight { Half, ThreeHalves };

inline int weight_numerator(HalfWeight w) { return w == HalfWeight::Half ? 1 : 3; }

// A candidate (beta, S3, a) with its weight vector.
struct GTriple {
    QuadElem beta;
    std::vector<PrimePlace> s3;
    FracIdeal ideal;
    std::vector<HalfWeight> weights;
};

// --- construction and arithmetic ------------------------------------------

FracIdeal unit_ideal(const FieldCtx& ctx);
FracIdeal rational_ideal(const FieldCtx& ctx, const Rat& q); // (q), q != 0
FracIdeal principal_ideal(const FieldCtx& ctx, const QuadElem& g);
FracIdeal place_ideal(const FieldCtx& ctx, const PrimePlace& v);

FracIdeal operator*(const FracIdeal& a, const FracIdeal& b);
FracIdeal operator/(const FracIdeal& a, const FracIdeal& b);
FracIdeal ideal_inverse(const FracIdeal& a);
FracIdeal ideal_conj(const FracIdeal& a);
FracIdeal ideal_pow(const FracIdeal& a, long n);

Rat ideal_norm(const FracIdeal& a);
bool ideal_is_integral(const FracIdeal& a);
bool ideal_contains(const FracIdeal& a, const QuadElem& x);

// The different ideal: (sqrt d_K) for quadratic fields, (1) over Q.
FracIdeal different(const FieldCtx& ctx);

std::vector<PrimePlace> primes_above(const FieldCtx& ctx, long p);
std::vector<PrimePlace> S2_places(const FieldCtx& ctx); // places with F_v = Q_2
std::vector<PrimePlace> T3_places(const FieldCtx& ctx); // places with q_v = 3

// Exact valuations.
int elem_ord(const QuadElem& x, const PrimePlace& v); // x != 0
int ord_at(const FracIdeal& a, const PrimePlace& v);

// Factorization into prime places by trial division of the norm's support.
// Throws Error("norm too large") past the bound.
std::vector<std::pair<PrimePlace, int>> factor_ideal(const FracIdeal& a,
                                                     long bound = 1000000);

std::optional<FracIdeal> ideal_sqrt(const FracIdeal& a, long bound = 1000000);

// Fundamental unit eps > 1 of the quadratic field, by the continued fraction
// of omega; second component is its norm (+1 or -1).
std::pair<QuadElem, int> fundamental_unit(const FieldCtx& ctx);

// [E^+ : E^2] = 2 if N(eps) = 1, else 1; equals 1 over Q.
int tp_unit_sq_index(const FieldCtx& ctx);

// A generator of the ideal if principal (any sign normalization), or a
// totally positive generator if narrowly principal; none otherwise.
std::optional<QuadElem> any_generator(const FieldCtx& ctx, const FracIdeal& a);
std::optional<QuadElem> tp_generator(const FieldCtx& ctx, const FracIdeal& a);

// Image of x in o_v / p_v^k under the degree-one embedding.  Split places
// use the Hensel root of omega; ramified places only support k = 1.
PadicResidue residue_at(const FieldCtx& ctx, const QuadElem& x, const PrimePlace& v, int k);

std::string to_string(const FracIdeal& a);

} // namespace hmtheta
