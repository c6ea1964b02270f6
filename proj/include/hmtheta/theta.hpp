#pragma once

#include "hmtheta/multiplier.hpp"

#include <complex>
#include <vector>

namespace hmtheta {

// One merged Fourier term: nu = beta xi^2 totally positive, xi the
// representative with positive first embedding, sign = f(xi), and
// coeff = 2 sign prod_{i in S_inf} iota_i(xi).
struct ThetaEntry {
    QuadElem nu;
    QuadElem xi;
    int sign = 0;
    double coeff = 0;
    Rat trace; // Tr(nu), the exact exponent weight
};

struct ThetaExpansion {
    GTriple triple;
    Rat bound;
    std::vector<ThetaEntry> entries; // complete for Tr(nu) <= bound, ascending
};

struct EvalPoint {
    std::vector<std::complex<double>> z; // Im z_i > 0
};

struct TransformReport {
    std::complex<double> lhs, rhs;
    double rel_err = 0;
};

// f_v(xi) at v in S2 (xi mod 4: +-1 or even) or v in S3 (xi mod p_v).
int local_factor(const FieldCtx& ctx, const GTriple& t, const QuadElem& xi,
                 const PrimePlace& v);

// All terms with Tr(beta xi^2) <= bound, xi in a^{-1}, by exact enumeration.
ThetaExpansion q_expansion(const FieldCtx& ctx, const GTriple& t, const Rat& bound);

// Numeric theta value with a proven tail bound below tol.
std::complex<double> evaluate(const FieldCtx& ctx, const GTriple& t, const EvalPoint& z,
                              double tol);

// Dedekind eta by the truncated product, tail below 1e-15.
std::complex<double> eta(std::complex<double> z);
std::complex<double> eta_cubed(std::complex<double> z);

// Compares theta(gamma z) against v_lambda(gamma) prod J(gamma, z_i)^{2 w_i}
// theta(z).
TransformReport verify_transform(const FieldCtx& ctx, const GTriple& t, const SL2Mat& g,
                                 const EvalPoint& z, double tol);

// Generators used for random words: u+(1), u+(omega), u-(1), u-(omega),
// (0,-1;1,0) and -1.
std::vector<SL2Mat> sl2_generators(const FieldCtx& ctx);

struct SuiteReport {
    int words = 0;
    double max_rel_err = 0;
    bool pass = true;
};

// Random-word transformation suite.  Words are resampled until every
// embedding of c stays below a height cap, and the sample points are chosen
// so that both z and gamma(z) keep their imaginary parts bounded below;
// this keeps the proven tail bounds affordable.
SuiteReport transform_suite(const FieldCtx& ctx, const GTriple& t, int n_words,
                            int max_len, int pts_per_word, double tol,
                            unsigned long seed);

} // namespace hmtheta
