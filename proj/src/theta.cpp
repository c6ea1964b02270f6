#include "hmtheta/theta.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hmtheta {

using boost::multiprecision::numerator;
using boost::multiprecision::denominator;

int local_factor(const FieldCtx& ctx, const GTriple& t, const QuadElem& xi,
                 const PrimePlace& v) {
    if (v.is_dyadic_q2()) {
        long r = residue_at(ctx, xi, v, 2).value.convert_to<long>();
        if (r == 1)
            return 1;
        if (r == 3)
            return -1;
        if (r % 2 == 0)
            return 0;
        throw Error("unexpected dyadic residue");
    }
    bool in_s3 = false;
    for (auto& w : t.s3)
        if (w == v)
            in_s3 = true;
    if (in_s3 && v.q() == 3) {
        // 2 is a unit here, so 1 + 2p = 1 + p
        long r = residue_at(ctx, xi, v, 1).value.convert_to<long>();
        if (r == 1)
            return 1;
        if (r == 2)
            return -1;
        return 0;
    }
    throw Error("local factor only defined on S2 and S3");
}

namespace {

struct LatticeBasis {
    // xi = x*g1 + y*g2 over integers x, y (g2 = 0 over Q)
    QuadElem g1, g2;
    int rank = 1;
};

Rat round_rat(const Rat& x) {
    // nearest integer: floor(x + 1/2), with floor division on cpp_int
    Int n = 2 * numerator(x) + denominator(x), d = 2 * denominator(x);
    Int q = n / d;
    if (n % d != 0 && n < 0)
        --q;
    return Rat(q);
}

// <u, v> under the Minkowski embedding: iota1(u) iota1(v) + iota2(u) iota2(v).
Rat mink_dot(const QuadElem& u, const QuadElem& v) {
    return 2 * (u.x * v.x + u.y * v.y * u.D);
}

LatticeBasis inverse_ideal_basis(const FieldCtx& ctx, const FracIdeal& a) {
    FracIdeal inv = ideal_inverse(a);
    LatticeBasis b;
    if (ctx.D == 0) {
        b.g1 = ctx.from_rat(inv.scale);
        b.g2 = ctx.from_rat(0);
        b.rank = 1;
        return b;
    }
    b.g1 = ctx.from_rat(inv.scale * Rat(inv.a));
    b.g2 = inv.scale * QuadElem::from_omega_coords(Rat(inv.b), 1, ctx.D);
    b.rank = 2;
    // Lagrange reduction keeps the enumeration coordinates small, which
    // both shrinks the search region and avoids cancellation when the
    // embeddings are recombined in floating point.
    for (int guard = 0; guard < 256; ++guard) {
        if (mink_dot(b.g1, b.g1) < mink_dot(b.g2, b.g2))
            std::swap(b.g1, b.g2);
        Rat mu = round_rat(mink_dot(b.g1, b.g2) / mink_dot(b.g2, b.g2));
        if (mu == 0)
            break;
        b.g1 = b.g1 - mu * b.g2;
    }
    if (mink_dot(b.g1, b.g1) < mink_dot(b.g2, b.g2))
        std::swap(b.g1, b.g2);
    return b;
}

int total_factor(const FieldCtx& ctx, const GTriple& t, const QuadElem& xi) {
    int f = 1;
    for (auto& v : S2_places(ctx)) {
        f *= local_factor(ctx, t, xi, v);
        if (f == 0)
            return 0;
    }
    for (auto& v : t.s3) {
        f *= local_factor(ctx, t, xi, v);
        if (f == 0)
            return 0;
    }
    return f;
}

double weight_product(const GTriple& t, const QuadElem& xi) {
    double w = 1.0;
    for (size_t i = 0; i < t.weights.size(); ++i)
        if (t.weights[i] == HalfWeight::ThreeHalves)
            w *= xi.embed(static_cast<int>(i) + 1);
    return w;
}

// Enumeration of xi = x g1 + y g2 with |iota_i(xi)| <= A_i: x ranges over
// the projection bound from the inverse embedding matrix, and for each x the
// feasible y interval is the intersection of the two embedding strips.
struct StripRange {
    long xmin = 0, xmax = 0;
    double s11, s12, s21, s22; // embeddings of g1, g2
    double A1, A2;
    int rank = 1;

    // y interval for fixed x (empty if lo > hi)
    std::pair<long, long> y_range(long x) const {
        if (rank == 1)
            return {0, 0};
        double lo = -1e18, hi = 1e18;
        auto clip = [&](double g1e, double g2e, double A) {
            double a = (-A - x * g1e) / g2e, b = (A - x * g1e) / g2e;
            if (a > b)
                std::swap(a, b);
            lo = std::max(lo, a);
            hi = std::min(hi, b);
        };
        clip(s11, s12, A1);
        clip(s21, s22, A2);
        if (lo > hi)
            return {1, 0};
        return {static_cast<long>(std::ceil(lo - 1e-9)), static_cast<long>(std::floor(hi + 1e-9))};
    }
};

StripRange strip_range(const LatticeBasis& b, double A1, double A2) {
    StripRange s;
    s.rank = b.rank;
    s.s11 = b.g1.embed(1);
    if (b.rank == 1) {
        long X = static_cast<long>(std::floor(A1 / std::abs(s.s11) + 1e-9)) + 1;
        s.xmin = -X;
        s.xmax = X;
        return s;
    }
    s.s12 = b.g2.embed(1);
    s.s21 = b.g1.embed(2);
    s.s22 = b.g2.embed(2);
    s.A1 = A1 * (1 + 1e-9);
    s.A2 = A2 * (1 + 1e-9);
    double det = s.s11 * s.s22 - s.s12 * s.s21;
    double X = (std::abs(s.s22) * A1 + std::abs(s.s12) * A2) / std::abs(det);
    s.xmin = -(static_cast<long>(std::floor(X * (1 + 1e-9))) + 1);
    s.xmax = -s.xmin;
    return s;
}

} // namespace

ThetaExpansion q_expansion(const FieldCtx& ctx, const GTriple& t, const Rat& bound) {
    ThetaExpansion out;
    out.triple = t;
    out.bound = bound;
    if (bound <= 0)
        return out;
    LatticeBasis basis = inverse_ideal_basis(ctx, t.ideal);
    double Bd = static_cast<double>(bound);
    double b1 = t.beta.embed(1);
    double b2 = (ctx.D == 0) ? b1 : t.beta.embed(2);
    double A1 = std::sqrt(Bd / b1) * (1 + 1e-9);
    double A2 = std::sqrt(Bd / b2) * (1 + 1e-9);
    StripRange strip = strip_range(basis, A1, A2);

    for (long x = strip.xmin; x <= strip.xmax; ++x) {
        auto [ylo, yhi] = strip.y_range(x);
        for (long y = ylo; y <= yhi; ++y) {
            if (x == 0 && y == 0)
                continue;
            // double prefilter, strictly more permissive than the exact test
            double e1 = x * strip.s11 + (strip.rank == 2 ? y * strip.s12 : 0);
            if (e1 < -1e-9 * (1 + std::abs(e1)))
                continue;
            QuadElem xi = Rat(x) * basis.g1 + Rat(y) * basis.g2;
            if (embedding_sign(xi, 1) <= 0)
                continue; // merge xi and -xi: keep the positive representative
            QuadElem nu = t.beta * xi * xi;
            Rat trace = (ctx.D == 0) ? nu.x : nu.trace();
            if (trace > bound)
                continue;
            int f = total_factor(ctx, t, xi);
            if (f == 0)
                continue;
            ThetaEntry e;
            e.nu = nu;
            e.xi = xi;
            e.sign = f;
            e.coeff = 2.0 * f * weight_product(t, xi);
            e.trace = trace;
            out.entries.push_back(std::move(e));
        }
    }
    std::sort(out.entries.begin(), out.entries.end(), [](const ThetaEntry& a, const ThetaEntry& b) {
        if (a.trace != b.trace)
            return a.trace < b.trace;
        if (a.nu.x != b.nu.x)
            return a.nu.x < b.nu.x;
        return a.nu.y < b.nu.y;
    });
    return out;
}

namespace {

struct TailModel {
    double c_count; // lattice points with Tr <= t is bounded by c_count * max(t,1)
    double c_coeff; // |coefficient| at Tr <= t is bounded by c_coeff * max(t,1)
};

TailModel tail_model(const FieldCtx& ctx, const GTriple& t) {
    LatticeBasis basis = inverse_ideal_basis(ctx, t.ideal);
    double b1 = t.beta.embed(1);
    double b2 = (ctx.D == 0) ? b1 : t.beta.embed(2);
    TailModel m{};
    if (basis.rank == 1) {
        double g = std::abs(basis.g1.embed(1));
        double gx = 1.0 / (g * std::sqrt(b1));
        m.c_count = (2 * gx + 1) * 1.0;
    } else {
        double m11 = basis.g1.embed(1), m12 = basis.g2.embed(1);
        double m21 = basis.g1.embed(2), m22 = basis.g2.embed(2);
        double det = std::abs(m11 * m22 - m12 * m21);
        double gx = (std::abs(m22) / std::sqrt(b1) + std::abs(m12) / std::sqrt(b2)) / det;
        double gy = (std::abs(m21) / std::sqrt(b1) + std::abs(m11) / std::sqrt(b2)) / det;
        m.c_count = (2 * gx + 1) * (2 * gy + 1);
    }
    double w = 2.0;
    for (size_t i = 0; i < t.weights.size(); ++i)
        if (t.weights[i] == HalfWeight::ThreeHalves)
            w /= std::sqrt(i == 0 ? b1 : b2);
    m.c_coeff = w;
    return m;
}

// Upper bound for sum_{m >= M} c (m+2)^2 x^m with x = exp(-2 pi y0).
double tail_bound(const TailModel& m, double y0, double M) {
    double x = std::exp(-2 * M_PI * y0);
    double s0 = 1 / (1 - x);
    double s1 = x / ((1 - x) * (1 - x));
    double s2 = x * (1 + x) / ((1 - x) * (1 - x) * (1 - x));
    double a = M + 2;
    double series = a * a * s0 + 2 * a * s1 + s2;
    return m.c_count * m.c_coeff * std::pow(x, M) * series;
}

} // namespace

std::complex<double> evaluate(const FieldCtx& ctx, const GTriple& t, const EvalPoint& z,
                              double tol) {
    if (static_cast<int>(z.z.size()) != ctx.degree())
        throw Error("evaluation point has wrong arity");
    double y0 = 1e300;
    for (auto& zi : z.z) {
        if (zi.imag() <= 0)
            throw Error("point must lie in the upper half plane");
        y0 = std::min(y0, zi.imag());
    }
    TailModel model = tail_model(ctx, t);
    double B = 1;
    while (tail_bound(model, y0, std::floor(B)) >= tol) {
        B *= 2;
        if (B > 1e12)
            throw Error("tail bound does not converge");
    }

    // numeric enumeration; the exact expansion is the exported artifact,
    // evaluation only needs doubles.  Local factors reduce to residues of
    // the basis vectors, precomputed once per place.
    LatticeBasis basis = inverse_ideal_basis(ctx, t.ideal);
    double b1 = t.beta.embed(1);
    double b2 = (ctx.D == 0) ? b1 : t.beta.embed(2);
    double A1 = std::sqrt(B / b1) * (1 + 1e-9);
    double A2 = std::sqrt(B / b2) * (1 + 1e-9);
    StripRange strip = strip_range(basis, A1, A2);

    double g11 = basis.g1.embed(1), g12 = (basis.rank == 2) ? basis.g2.embed(1) : 0;
    double g21 = (ctx.D == 0) ? g11 : basis.g1.embed(2);
    double g22 = (basis.rank == 2) ? basis.g2.embed(2) : 0;

    struct PlaceRes {
        long mod;      // 4 at dyadic places, 3 at places over 3
        long r1, r2;   // residues of the basis vectors
    };
    std::vector<PlaceRes> residues;
    auto add_place = [&](const PrimePlace& v, int k, long mod) {
        long r1 = residue_at(ctx, basis.g1, v, k).value.convert_to<long>();
        long r2 = basis.rank == 2 ? residue_at(ctx, basis.g2, v, k).value.convert_to<long>() : 0;
        residues.push_back({mod, r1, r2});
    };
    for (auto& v : S2_places(ctx))
        add_place(v, 2, 4);
    for (auto& v : t.s3)
        add_place(v, 1, 3);

    std::complex<double> acc = 0;
    const std::complex<double> two_pi_i(0, 2 * M_PI);
    for (long x = strip.xmin; x <= strip.xmax; ++x) {
        auto [ylo, yhi] = strip.y_range(x);
        for (long y = ylo; y <= yhi; ++y) {
            if (x == 0 && y == 0)
                continue;
            double e1 = x * g11 + y * g12;
            if (e1 <= 0)
                continue;
            double e2 = (ctx.D == 0) ? e1 : x * g21 + y * g22;
            double n1 = b1 * e1 * e1, n2 = b2 * e2 * e2;
            double tr = (ctx.D == 0) ? n1 : n1 + n2;
            if (tr > B)
                continue;
            int f = 1;
            for (auto& pr : residues) {
                long r = (x % pr.mod * pr.r1 + y % pr.mod * pr.r2) % pr.mod;
                if (r < 0)
                    r += pr.mod;
                if (r == 1) {
                    // unit residue, factor +1
                } else if (r == pr.mod - 1) {
                    f = -f;
                } else {
                    f = 0;
                    break;
                }
            }
            if (f == 0)
                continue;
            double coeff = 2.0 * f;
            for (size_t i = 0; i < t.weights.size(); ++i)
                if (t.weights[i] == HalfWeight::ThreeHalves)
                    coeff *= (i == 0) ? e1 : e2;
            std::complex<double> phase = z.z[0] * n1;
            if (ctx.D != 0)
                phase += z.z[1] * n2;
            acc += coeff * std::exp(two_pi_i * phase);
        }
    }
    return acc;
}

std::complex<double> eta(std::complex<double> z) {
    if (z.imag() <= 0)
        throw Error("point must lie in the upper half plane");
    const std::complex<double> two_pi_i(0, 2 * M_PI);
    std::complex<double> q = std::exp(two_pi_i * z);
    double aq = std::abs(q);
    // product tail: |log prod_{m>M}(1-q^m)| <= 2 |q|^{M+1}/(1-|q|)
    int M = 1;
    while (2 * std::pow(aq, M + 1) / (1 - aq) > 1e-16)
        ++M;
    std::complex<double> prod = std::exp(two_pi_i * (z / 24.0));
    std::complex<double> qm = 1;
    for (int m = 1; m <= M; ++m) {
        qm *= q;
        prod *= (1.0 - qm);
    }
    return prod;
}

std::complex<double> eta_cubed(std::complex<double> z) {
    std::complex<double> e = eta(z);
    return e * e * e;
}

TransformReport verify_transform(const FieldCtx& ctx, const GTriple& t, const SL2Mat& g,
                                 const EvalPoint& z, double tol) {
    MultiplierSpec spec{ctx, t};
    UnitRoot mult = v_lambda(spec, g);

    EvalPoint gz = z;
    std::complex<double> jfac = 1;
    for (int i = 1; i <= ctx.degree(); ++i) {
        std::complex<double> zi = z.z[i - 1];
        double a = g.a.embed(i), b = g.b.embed(i), c = g.c.embed(i), d = g.d.embed(i);
        gz.z[i - 1] = (a * zi + b) / (c * zi + d);
        std::complex<double> J = automorphy_J(g, i, zi);
        int w2 = weight_numerator(t.weights[i - 1]); // exponent 2 w_i = 1 or 3
        jfac *= (w2 == 1) ? J : J * J * J;
    }

    // absolute tolerances tied to the target size
    double eval_tol = tol * 1e-3;
    std::complex<double> rhs0 = evaluate(ctx, t, z, eval_tol);
    double scale = std::max(std::abs(rhs0 * jfac), 1e-8);
    eval_tol = tol * scale * 0.05;
    TransformReport rep;
    rep.lhs = evaluate(ctx, t, gz, eval_tol);
    rep.rhs = mult.value() * jfac * evaluate(ctx, t, z, eval_tol);
    rep.rel_err = std::abs(rep.lhs - rep.rhs) /
                  std::max({std::abs(rep.lhs), std::abs(rep.rhs), 1e-300});
    return rep;
}

std::vector<SL2Mat> sl2_generators(const FieldCtx& ctx) {
    QuadElem one = ctx.from_rat(1), zero = ctx.from_rat(0);
    std::vector<SL2Mat> gens;
    gens.push_back(make_sl2(one, one, zero, one));   // u+(1)
    gens.push_back(make_sl2(one, zero, one, one));   // u-(1)
    gens.push_back(make_sl2(zero, -one, one, zero)); // S
    gens.push_back(make_sl2(-one, zero, zero, -one));
    if (ctx.D != 0) {
        gens.push_back(make_sl2(one, ctx.omega(), zero, one));
        gens.push_back(make_sl2(one, zero, ctx.omega(), one));
    }
    return gens;
}

SuiteReport transform_suite(const FieldCtx& ctx, const GTriple& t, int n_words,
                            int max_len, int pts_per_word, double tol,
                            unsigned long seed) {
    std::mt19937_64 rng(seed);
    auto gens = sl2_generators(ctx);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double height_cap = 120.0;

    SuiteReport rep;
    rep.words = n_words;
    for (int w = 0; w < n_words; ++w) {
        SL2Mat g = sl2_identity(ctx);
        for (int tries = 0;; ++tries) {
            if (tries > 3000)
                throw Error("word sampling failed");
            SL2Mat cand = sl2_identity(ctx);
            int len = 1 + static_cast<int>(rng() % max_len);
            for (int i = 0; i < len; ++i)
                cand = cand * gens[rng() % gens.size()];
            bool ok = true;
            for (int i = 1; i <= ctx.degree(); ++i)
                if (std::abs(cand.c.embed(i)) > height_cap)
                    ok = false;
            if (ok) {
                g = cand;
                break;
            }
        }
        for (int pt = 0; pt < pts_per_word; ++pt) {
            // A relative identity cannot be certified in doubles where theta
            // nearly vanishes; resample points that land too close to a zero.
            TransformReport r;
            bool informative = false;
            for (int tries = 0; tries < 60 && !informative; ++tries) {
                EvalPoint z;
                for (int i = 1; i <= ctx.degree(); ++i) {
                    double x, y;
                    if (g.c.is_zero()) {
                        x = -1 + 2 * unit(rng);
                        y = 0.4 + 1.6 * unit(rng);
                    } else {
                        double ci = g.c.embed(i), di = g.d.embed(i);
                        // keep |c z + d| of order one so Im(gamma z) stays
                        // bounded below, but away from x = -d/c, where the
                        // phases align to structured cancellations
                        y = std::min(1.0, 1.0 / std::abs(ci));
                        double u = (1.0 + 1.5 * unit(rng)) * (rng() % 2 ? 1 : -1);
                        x = -di / ci + u / std::abs(ci);
                    }
                    z.z.push_back({x, y});
                }
                r = verify_transform(ctx, t, g, z, tol);
                informative = std::max(std::abs(r.lhs), std::abs(r.rhs)) >= 1e-5;
            }
            if (!informative)
                throw Error("no informative sample point found");
            rep.max_rel_err = std::max(rep.max_rel_err, r.rel_err);
            if (r.rel_err >= tol)
                rep.pass = false;
        }
    }
    return rep;
}

} // namespace hmtheta
