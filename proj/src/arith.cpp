#include "hmtheta/arith.hpp"

#include <boost/multiprecision/integer.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <tuple>
#include <sstream>

namespace hmtheta {

using boost::multiprecision::numerator;
using boost::multiprecision::denominator;
using boost::multiprecision::gcd;

Int egcd(const Int& a, const Int& b, Int& x, Int& y) {
    if (b == 0) {
        x = (a < 0) ? -1 : 1;
        y = 0;
        return abs(a);
    }
    Int x1, y1;
    Int g = egcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

Int mod_inverse(const Int& a, const Int& m) {
    Int x, y;
    Int g = egcd(a % m, m, x, y);
    if (g != 1)
        throw Error("mod_inverse: not invertible");
    Int r = x % m;
    if (r < 0)
        r += m;
    return r;
}

Int pow_mod(Int base, Int exp, const Int& mod) {
    return boost::multiprecision::powm(base % mod, exp, mod);
}

Int isqrt_floor(const Int& n) {
    if (n < 0)
        throw Error("isqrt of negative");
    return boost::multiprecision::sqrt(n);
}

bool is_square(const Int& n, Int& root) {
    if (n < 0)
        return false;
    root = isqrt_floor(n);
    return root * root == n;
}

int ord_p(Int n, long p) {
    if (n == 0)
        throw Error("ord_p of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

int ord_p(const Rat& x, long p) {
    if (x == 0)
        throw Error("ord_p of zero");
    return ord_p(numerator(x), p) - ord_p(denominator(x), p);
}

Int sqrt_mod_prime(Int a, long p) {
    Int P = p;
    a %= P;
    if (a < 0)
        a += P;
    if (a == 0)
        return 0;
    if (p == 2)
        return a % 2;
    if (pow_mod(a, (P - 1) / 2, P) != 1)
        throw Error("sqrt_mod_prime: not a residue");
    if (P % 4 == 3)
        return pow_mod(a, (P + 1) / 4, P);
    // Tonelli-Shanks
    Int q = P - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    Int z = 2;
    while (pow_mod(z, (P - 1) / 2, P) != P - 1)
        ++z;
    Int m = s, c = pow_mod(z, q, P), t = pow_mod(a, q, P), r = pow_mod(a, (q + 1) / 2, P);
    while (t != 1) {
        Int tt = t;
        int i = 0;
        while (tt != 1) {
            tt = tt * tt % P;
            ++i;
        }
        Int b = c;
        for (Int j = 0; j < m - i - 1; ++j)
            b = b * b % P;
        m = i;
        c = b * b % P;
        t = t * c % P;
        r = r * b % P;
    }
    return r;
}

bool is_probable_prime(const Int& n) {
    if (n < 2)
        return false;
    for (long p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == p)
            return true;
        if (n % p == 0)
            return false;
    }
    Int d = n - 1;
    int s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    // deterministic for n < 3.3e24 with these witnesses
    for (long a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        Int x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool witness = true;
        for (int i = 0; i < s - 1; ++i) {
            x = x * x % n;
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness)
            return false;
    }
    return true;
}

namespace {

Int pollard_brent(const Int& n) {
    if (n % 2 == 0)
        return 2;
    std::uint64_t state = 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(n % 1000000007);
    auto next = [&state] {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    };
    for (;;) {
        Int y = Int(next()) % n, c = Int(next()) % n, m = 128;
        if (c == 0)
            c = 1;
        Int g = 1, r = 1, q = 1, x, ys;
        while (g == 1) {
            x = y;
            for (Int i = 0; i < r; ++i)
                y = (y * y + c) % n;
            Int k = 0;
            while (k < r && g == 1) {
                ys = y;
                Int lim = std::min(m, Int(r - k));
                for (Int i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                g = gcd(abs(x - ys), n);
            }
        }
        if (g != n)
            return g;
    }
}

void factor_rec(const Int& n, std::vector<Int>& primes) {
    if (n == 1)
        return;
    if (is_probable_prime(n)) {
        primes.push_back(n);
        return;
    }
    Int d = pollard_brent(n);
    factor_rec(d, primes);
    factor_rec(n / d, primes);
}

} // namespace

std::vector<std::pair<long, int>> factor_trial(Int n, long bound) {
    std::vector<std::pair<long, int>> out;
    n = abs(n);
    if (n == 0)
        throw Error("factor of zero");
    long trial_to = std::min(bound, 100000L);
    for (long p = 2; n > 1 && p <= trial_to; p += (p == 2) ? 1 : 2) {
        if (Int(p) * p > n)
            break;
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.emplace_back(p, e);
        }
    }
    if (n > 1) {
        std::vector<Int> primes;
        factor_rec(n, primes);
        std::sort(primes.begin(), primes.end());
        for (size_t i = 0; i < primes.size();) {
            size_t j = i;
            while (j < primes.size() && primes[j] == primes[i])
                ++j;
            if (primes[i] > bound)
                throw Error("norm too large");
            out.emplace_back(primes[i].convert_to<long>(), static_cast<int>(j - i));
            i = j;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Rat padic_frac(const Rat& x, long p) {
    if (x == 0)
        return Rat(0);
    Int den = denominator(x);
    int g = ord_p(den, p);
    if (g == 0)
        return Rat(0);
    Int pg = 1;
    for (int i = 0; i < g; ++i)
        pg *= p;
    Int dprime = den / pg;
    Int r = numerator(x) % pg * mod_inverse(dprime, pg) % pg;
    if (r < 0)
        r += pg;
    return Rat(r, pg);
}

namespace {

Int pow_long(long p, int k) {
    Int r = 1;
    for (int i = 0; i < k; ++i)
        r *= p;
    return r;
}

// f(t) = t^2 - t - (D-1)/4 when D = 1 mod 4, else t^2 - D
Int minpoly_eval(long D, const Int& t) {
    if ((D % 4 + 4) % 4 == 1)
        return t * t - t - Int(D - 1) / 4;
    return t * t - D;
}

Int minpoly_deriv(long D, const Int& t) {
    if ((D % 4 + 4) % 4 == 1)
        return 2 * t - 1;
    return 2 * t;
}

} // namespace

PadicResidue hensel_root(long D, long p, int k, int label) {
    if (k < 1)
        throw Error("hensel_root: precision must be >= 1");
    if (D <= 1)
        throw Error("no degree-one place");
    thread_local std::map<std::tuple<long, long, int, int>, PadicResidue> cache;
    auto key = std::make_tuple(D, p, k, label);
    if (auto it = cache.find(key); it != cache.end())
        return it->second;
    Int r0;
    if (p == 2) {
        if ((D - 1) % 8 != 0)
            throw Error("no degree-one place");
        // t(t-1) = 0 mod 2
        r0 = (label == 1) ? 0 : 1;
    } else {
        if (D % p == 0)
            throw Error("no degree-one place");
        Int dm = Int(D) % p;
        if (pow_mod(dm, (Int(p) - 1) / 2, p) != 1)
            throw Error("no degree-one place");
        Int s = sqrt_mod_prime(dm, p);
        Int r1, r2;
        if ((D % 4 + 4) % 4 == 1) {
            Int inv2 = mod_inverse(2, p);
            r1 = (1 + s) % p * inv2 % p;
            r2 = (1 - s % p + p) % p * inv2 % p;
        } else {
            r1 = s;
            r2 = (p - s) % p;
        }
        if (r1 > r2)
            std::swap(r1, r2);
        r0 = (label == 1) ? r1 : r2;
    }
    // Newton lifting; f'(r0) is a unit mod p in both branches.
    Int mod = p;
    Int pk = pow_long(p, k);
    Int r = r0;
    while (mod < pk) {
        mod = mod * mod;
        if (mod > pk)
            mod = pk;
        Int fr = minpoly_eval(D, r) % mod;
        Int dfr = minpoly_deriv(D, r) % mod;
        r = (r - fr * mod_inverse(dfr, mod)) % mod;
        if (r < 0)
            r += mod;
    }
    r %= pk;
    if (r < 0)
        r += pk;
    PadicResidue res{p, k, r};
    if (cache.size() < 10000)
        cache.emplace(key, res);
    return res;
}

// --- QuadElem --------------------------------------------------------------

QuadElem::QuadElem(Rat x_, Rat y_, long D_) : x(std::move(x_)), y(std::move(y_)), D(D_) {
    if (D == 0 && y != 0)
        throw Error("rational field element with nonzero sqrt part");
}

Rat QuadElem::norm() const {
    return x * x - y * y * D;
}

std::pair<Rat, Rat> QuadElem::omega_coords() const {
    if (D == 0)
        return {x, Rat(0)};
    if ((D % 4 + 4) % 4 == 1)
        return {x - y, 2 * y}; // omega = (1+sqrt D)/2
    return {x, y};             // omega = sqrt D
}

QuadElem QuadElem::from_omega_coords(const Rat& u, const Rat& v, long D) {
    if (D == 0)
        return QuadElem(u, 0, 0);
    if ((D % 4 + 4) % 4 == 1)
        return QuadElem(u + v / 2, v / 2, D);
    return QuadElem(u, v, D);
}

bool QuadElem::is_integral() const {
    auto [u, v] = omega_coords();
    return denominator(u) == 1 && denominator(v) == 1;
}

double QuadElem::embed(int place) const {
    double sq = (D == 0) ? 0.0 : std::sqrt(static_cast<double>(D));
    double sgn = (place == 1) ? 1.0 : -1.0;
    return static_cast<double>(x) + sgn * static_cast<double>(y) * sq;
}

namespace {
void require_same_field(const QuadElem& a, const QuadElem& b) {
    if (a.D != b.D)
        throw Error("mixed field contexts");
}
} // namespace

QuadElem operator+(const QuadElem& a, const QuadElem& b) {
    require_same_field(a, b);
    return QuadElem(a.x + b.x, a.y + b.y, a.D);
}

QuadElem operator-(const QuadElem& a, const QuadElem& b) {
    require_same_field(a, b);
    return QuadElem(a.x - b.x, a.y - b.y, a.D);
}

QuadElem operator-(const QuadElem& a) {
    return QuadElem(-a.x, -a.y, a.D);
}

QuadElem operator*(const QuadElem& a, const QuadElem& b) {
    require_same_field(a, b);
    return QuadElem(a.x * b.x + a.y * b.y * a.D, a.x * b.y + a.y * b.x, a.D);
}

QuadElem operator/(const QuadElem& a, const QuadElem& b) {
    require_same_field(a, b);
    if (b.is_zero())
        throw Error("division by zero");
    Rat n = b.norm();
    QuadElem t = a * b.conj();
    return QuadElem(t.x / n, t.y / n, a.D);
}

QuadElem operator*(const Rat& s, const QuadElem& a) {
    return QuadElem(s * a.x, s * a.y, a.D);
}

int embedding_sign(const QuadElem& a, int place) {
    if (place != 1 && place != 2)
        throw Error("embedding place must be 1 or 2");
    Rat ys = (place == 1) ? a.y : -a.y;
    int sx = a.x.sign();
    int sy = ys.sign();
    if (sy == 0)
        return sx;
    if (sx == 0)
        return sy;
    if (sx == sy)
        return sx;
    // Signs differ: compare x^2 against y^2 D.
    int cmp = Rat(a.x * a.x - a.y * a.y * a.D).sign();
    if (cmp == 0)
        return 0; // impossible for square-free D > 1, but exact anyway
    return (cmp > 0) ? sx : sy;
}

bool totally_positive(const QuadElem& a) {
    if (a.D == 0)
        return a.x > 0;
    return embedding_sign(a, 1) > 0 && embedding_sign(a, 2) > 0;
}

std::string to_string(const Rat& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1)
        os << "/" << denominator(r);
    return os.str();
}

std::string to_string(const QuadElem& a) {
    if (a.y == 0)
        return to_string(a.x);
    std::ostringstream os;
    os << to_string(a.x) << " + " << to_string(a.y) << "*sqrt(" << a.D << ")";
    return os.str();
}

} // namespace hmtheta
