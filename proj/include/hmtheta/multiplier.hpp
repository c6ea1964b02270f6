#pragma once

#include "hmtheta/localsymbols.hpp"

#include <complex>
#include <functional>

namespace hmtheta {

// Exact root of unity e(r) = exp(2 pi i r), stored as the exponent mod 1.
struct UnitRoot {
    Rat r;

    UnitRoot() : r(0) {}
    explicit UnitRoot(Rat e) : r(reduce(std::move(e))) {}

    static Rat reduce(Rat e);
    static UnitRoot one() { return UnitRoot(); }
    static UnitRoot sign(int s) { return UnitRoot(s < 0 ? Rat(1, 2) : Rat(0)); }

    UnitRoot inverse() const { return UnitRoot(-r); }
    UnitRoot pow(long n) const { return UnitRoot(r * n); }
    std::complex<double> value() const;

    friend UnitRoot operator*(const UnitRoot& a, const UnitRoot& b) {
        return UnitRoot(a.r + b.r);
    }
    friend bool operator==(const UnitRoot&, const UnitRoot&) = default;
};

// The data needed to evaluate the multiplier system attached to a triple:
// the local characters are epsilon_v away from S2 and S3, and mu_beta with
// the triple's global beta at the places of S2 and S3.
struct MultiplierSpec {
    FieldCtx ctx;
    GTriple triple;
};

// psi_{beta,v}(x) = e_p(beta x) as an exact root of unity, for a finite
// place with residue degree one.
UnitRoot psi_local(const FieldCtx& ctx, const QuadElem& beta, const QuadElem& x,
                   const PrimePlace& v);

// Local correction kappa_v(beta, g) at v in S2 or S3.
UnitRoot kappa_v(const MultiplierSpec& spec, const SL2Mat& g, const PrimePlace& v);

// v_lambda(g) = v_0(g) * prod_{v in S2 u S3} kappa_v(beta, g).
UnitRoot v_lambda(const MultiplierSpec& spec, const SL2Mat& g);

// The eta multiplier on SL_2(Z), as an exact 24th root of unity.
UnitRoot v_eta(const SL2Mat& g);

// prod over real embeddings of the Kubota cocycle, computed with exact signs.
int c_infinity(const FieldCtx& ctx, const SL2Mat& g1, const SL2Mat& g2);

// v(g1) v(g2) = c_infinity(g1,g2) v(g1 g2), tested exactly.
bool cocycle_check(const FieldCtx& ctx, const std::function<UnitRoot(const SL2Mat&)>& v,
                   const SL2Mat& g1, const SL2Mat& g2);

// J(g, z) at one real embedding: sqrt(d) (c = 0, d > 0), -sqrt(d) (c = 0,
// d < 0), (cz+d)^{1/2} with arg in (-pi, pi] otherwise.
std::complex<double> automorphy_J(const SL2Mat& g, int place, std::complex<double> z);

} // namespace hmtheta
