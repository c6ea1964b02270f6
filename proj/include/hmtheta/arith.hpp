#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hmtheta {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- integer utilities ---------------------------------------------------

Int egcd(const Int& a, const Int& b, Int& x, Int& y);
Int mod_inverse(const Int& a, const Int& m);
Int pow_mod(Int base, Int exp, const Int& mod);
Int isqrt_floor(const Int& n);
bool is_square(const Int& n, Int& root);

// Valuation of a nonzero integer / rational at a prime p.
int ord_p(Int n, long p);
int ord_p(const Rat& x, long p);

// Square root of a mod odd prime p (Tonelli-Shanks); a must be a QR.
Int sqrt_mod_prime(Int a, long p);

// Complete factorization (trial division plus Pollard-Brent rho for large
// cofactors); throws Error("norm too large") if a prime factor exceeds the
// bound.  Returns (prime, exponent) pairs, ascending.
std::vector<std::pair<long, int>> factor_trial(Int n, long bound = 1000000);

// A permissive bound for internal call sites that must handle whatever
// norms random inputs produce.
inline constexpr long factor_no_bound = 4000000000000000000L;

bool is_probable_prime(const Int& n);

// --- p-adic machinery ----------------------------------------------------

// value is a residue mod p^k, 0 <= value < p^k.
struct PadicResidue {
    long p = 0;
    int k = 0;
    Int value;
};

// Fractional part of x in Q_p: the unique r in [0,1) with denominator a
// power of p such that x - r is p-integral.
Rat padic_frac(const Rat& x, long p);

// Root of t^2 - t - (D-1)/4 mod p^k when D = 1 mod 4, of t^2 - D otherwise
// (the minimal polynomial of the integral generator omega).  Requires a
// degree-one split place: p odd with D a nonzero QR mod p, or p = 2 with
// D = 1 mod 8.  label 1 picks the lift of the smaller residue mod p,
// label 2 the other root; this fixes the naming of the two places above p.
PadicResidue hensel_root(long D, long p, int k, int label = 1);

// --- field elements ------------------------------------------------------

// x + y*sqrt(D) with rational x, y.  D = 0 marks the field Q (then y = 0).
// D > 1 must be square-free.
struct QuadElem {
    Rat x;
    Rat y;
    long D = 0;

    QuadElem() = default;
    QuadElem(Rat x_, Rat y_, long D_);
    static QuadElem rational(const Rat& r, long D = 0) { return QuadElem(r, 0, D); }

    bool is_zero() const { return x == 0 && y == 0; }
    bool is_rational() const { return y == 0; }

    QuadElem conj() const { return QuadElem(x, -y, D); }
    Rat norm() const;
    Rat trace() const { return 2 * x; }

    // Coordinates u + v*omega over the ring of integers' basis (1, omega).
    std::pair<Rat, Rat> omega_coords() const;
    static QuadElem from_omega_coords(const Rat& u, const Rat& v, long D);
    bool is_integral() const;

    double embed(int place) const; // numeric embedding, place 1 or 2

    friend bool operator==(const QuadElem&, const QuadElem&) = default;
};

QuadElem operator+(const QuadElem& a, const QuadElem& b);
QuadElem operator-(const QuadElem& a, const QuadElem& b);
QuadElem operator-(const QuadElem& a);
QuadElem operator*(const QuadElem& a, const QuadElem& b);
QuadElem operator/(const QuadElem& a, const QuadElem& b); // throws on b = 0
QuadElem operator*(const Rat& s, const QuadElem& a);

// Exact sign of the real embedding x + y*sqrt(D) (place 1) or x - y*sqrt(D)
// (place 2), decided by integer comparisons only.
int embedding_sign(const QuadElem& a, int place);

bool totally_positive(const QuadElem& a);

std::string to_string(const Rat& r);
std::string to_string(const QuadElem& a);

} // namespace hmtheta
