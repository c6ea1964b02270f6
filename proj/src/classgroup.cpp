#include "hmtheta/classgroup.hpp"

#include <algorithm>
#include <set>

namespace hmtheta {

namespace {

Int posmod(const Int& x, const Int& m) {
    Int r = x % m;
    if (r < 0)
        r += m;
    return r;
}

} // namespace

bool form_is_reduced(const QForm& f, const Int& delta) {
    Int s = isqrt_floor(delta);
    if (f.b <= 0 || f.b > s)
        return false;
    Int two_a = 2 * abs(f.a);
    if ((two_a + f.b) * (two_a + f.b) <= delta)
        return false; // 2|a| <= sqrt(delta) - b
    if (two_a > f.b && (two_a - f.b) * (two_a - f.b) >= delta)
        return false; // 2|a| >= sqrt(delta) + b
    return true;
}

QForm form_rho(const QForm& f, const Int& delta) {
    Int s = isqrt_floor(delta);
    Int ca = abs(f.c);
    Int r;
    if (ca > s) {
        r = posmod(-f.b, 2 * ca);
        if (r > ca)
            r -= 2 * ca;
    } else {
        // r = -b mod 2|c| in the window (s - 2|c|, s]
        r = posmod(-f.b - s, 2 * ca) + s - 2 * ca;
        if (r <= s - 2 * ca)
            r += 2 * ca;
    }
    Int cp = (r * r - delta) / (4 * f.c);
    return QForm{f.c, r, cp};
}

QForm form_reduce(QForm f, const Int& delta) {
    if (f.b * f.b - 4 * f.a * f.c != delta)
        throw Error("form has wrong discriminant");
    int guard = 0;
    while (!form_is_reduced(f, delta)) {
        f = form_rho(f, delta);
        if (++guard > 100000)
            throw Error("form reduction did not terminate");
    }
    return f;
}

std::vector<QForm> reduced_forms(const Int& delta) {
    Int s = isqrt_floor(delta);
    std::vector<QForm> out;
    for (Int b = 1; b <= s; ++b) {
        if ((delta - b * b) % 4 != 0)
            continue;
        Int n = (delta - b * b) / 4; // -ac
        if (n <= 0)
            continue;
        for (Int d = 1; d * d <= n; ++d) {
            if (n % d != 0)
                continue;
            for (Int a : std::initializer_list<Int>{d, Int(n / d)}) {
                QForm f{a, b, -(n / a)};
                if (form_is_reduced(f, delta)) {
                    out.push_back(f);
                    out.push_back(QForm{-f.a, f.b, -f.c});
                }
                if (d * d == n)
                    break;
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

// Oriented basis (a, -(b+omega)) of the HNF ideal a*Z + (b+omega)*Z.
QForm form_from_module(const FieldCtx& ctx, const Int& a, const Int& b) {
    long D = ctx.D;
    Int B, C;
    if (D % 4 == 1) {
        B = -(2 * b + 1);
        C = (b * b + b - Int(D - 1) / 4) / a;
        if ((b * b + b - Int(D - 1) / 4) % a != 0)
            throw Error("module is not an ideal");
    } else {
        B = -2 * b;
        C = (b * b - D) / a;
        if ((b * b - D) % a != 0)
            throw Error("module is not an ideal");
    }
    return QForm{a, B, C};
}

// Ideal attached to a form with positive leading coefficient.
FracIdeal module_from_form(const FieldCtx& ctx, QForm f) {
    Int delta = ctx.disc();
    if (f.a < 0)
        f = form_rho(f, delta); // cycle neighbours alternate the sign of a
    if (f.a < 0)
        throw Error("could not orient form");
    Int b;
    if (ctx.D % 4 == 1) {
        if (posmod(f.b, 2) != 1)
            throw Error("odd form coefficient expected");
        b = posmod((-f.b - 1) / 2, f.a);
    } else {
        if (posmod(f.b, 2) != 0)
            throw Error("even form coefficient expected");
        b = posmod(-f.b / 2, f.a);
    }
    return FracIdeal{ctx.D, 1, f.a, b};
}

} // namespace

int ClassGroup::lookup(QForm f) const {
    f = form_reduce(f, ctx.disc());
    auto it = form_class_.find(std::make_tuple(f.a, f.b, f.c));
    if (it == form_class_.end())
        throw Error("form not in the class table");
    return it->second;
}

int ClassGroup::class_of(const FracIdeal& A) const {
    if (trivial())
        return 0;
    // the positive rational scale is narrowly principal
    return lookup(form_from_module(ctx, A.a, A.b));
}

FracIdeal ClassGroup::class_ideal(int i) const {
    if (trivial())
        return unit_ideal(ctx);
    return module_from_form(ctx, reps[i]);
}

int ClassGroup::compose(int i, int j) const {
    if (trivial())
        return 0;
    return table_[i][j];
}

int ClassGroup::inverse(int i) const {
    if (trivial())
        return 0;
    for (int j = 0; j < size(); ++j)
        if (compose(i, j) == identity)
            return j;
    throw Error("no inverse found");
}

int ClassGroup::power(int i, long e) const {
    if (trivial())
        return 0;
    int acc = identity;
    int base = (e >= 0) ? i : inverse(i);
    unsigned long m = (e >= 0) ? e : -e;
    while (m) {
        if (m & 1)
            acc = compose(acc, base);
        base = compose(base, base);
        m >>= 1;
    }
    return acc;
}

std::vector<int> ClassGroup::squares_subgroup() const {
    std::set<int> s;
    for (int i = 0; i < size(); ++i)
        s.insert(compose(i, i));
    return std::vector<int>(s.begin(), s.end());
}

std::vector<int> ClassGroup::subgroup_closure(std::vector<int> gens) const {
    std::set<int> s{identity};
    gens.push_back(identity);
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<int> cur(s.begin(), s.end());
        for (int x : cur)
            for (int g : gens) {
                int y = compose(x, g);
                if (s.insert(y).second)
                    grew = true;
            }
    }
    return std::vector<int>(s.begin(), s.end());
}

int ClassGroup::wide_kernel_class() const {
    if (trivial())
        return 0;
    return class_of(principal_ideal(ctx, ctx.sqrtD()));
}

ClassGroup narrow_class_group(const FieldCtx& ctx, long bound) {
    ClassGroup g;
    g.ctx = ctx;
    if (ctx.D == 0)
        return g;
    Int delta = ctx.disc();
    if (delta > bound)
        throw Error("discriminant exceeds class group bound");

    auto forms = reduced_forms(delta);
    std::set<QForm> remaining(forms.begin(), forms.end());
    while (!remaining.empty()) {
        QForm start = *remaining.begin();
        std::vector<QForm> cycle;
        QForm f = start;
        do {
            cycle.push_back(f);
            if (remaining.erase(f) == 0)
                throw Error("rho left the reduced forms");
            f = form_rho(f, delta);
        } while (!(f == start));
        g.cycles.push_back(std::move(cycle));
    }

    for (size_t i = 0; i < g.cycles.size(); ++i) {
        QForm rep = *std::min_element(g.cycles[i].begin(), g.cycles[i].end());
        g.reps.push_back(rep);
        for (auto& f : g.cycles[i])
            g.form_class_[std::make_tuple(f.a, f.b, f.c)] = static_cast<int>(i);
    }

    g.identity = g.lookup(form_from_module(ctx, 1, 0));

    int h = g.size();
    g.table_.assign(h, std::vector<int>(h, 0));
    std::vector<FracIdeal> ideals;
    for (int i = 0; i < h; ++i)
        ideals.push_back(module_from_form(ctx, g.reps[i]));
    for (int i = 0; i < h; ++i)
        for (int j = i; j < h; ++j) {
            int k = g.class_of(ideals[i] * ideals[j]);
            g.table_[i][j] = k;
            g.table_[j][i] = k;
        }
    return g;
}

ClassGroupCriterion class_group_criterion(const ClassGroup& g, const std::vector<HalfWeight>& weights) {
    const FieldCtx& ctx = g.ctx;
    if (!ctx.two_splits())
        throw Error("no multiplier system of half-integral weight exists: 2 does not split completely");
    if (static_cast<int>(weights.size()) != ctx.degree())
        throw Error("weight vector length must equal the degree");

    int s_inf = 0;
    for (auto w : weights)
        if (w == HalfWeight::ThreeHalves)
            ++s_inf;
    int n = ctx.degree(); // |S2| = n since 2 splits completely

    auto t3 = T3_places(ctx);
    std::vector<int> t3_classes;
    for (auto& v : t3)
        t3_classes.push_back(g.class_of(place_ideal(ctx, v)));

    // H-bar modulo squares: generated by squares and products p_v * p_w.
    std::vector<int> gens = g.squares_subgroup();
    for (size_t i = 1; i < t3_classes.size(); ++i)
        gens.push_back(g.compose(t3_classes[i], t3_classes[0]));
    if (!t3_classes.empty())
        gens.push_back(g.compose(t3_classes[0], t3_classes[0]));
    auto hq = g.subgroup_closure(gens);
    auto member = [&](int x) {
        return std::binary_search(hq.begin(), hq.end(), x);
    };

    int d_class = g.class_of(different(ctx));
    ClassGroupCriterion res;
    if ((n + s_inf) % 2 == 0) {
        res.case_no = 1;
        res.exists = member(d_class);
    } else {
        res.case_no = 2;
        // v_0: the label-1 place over the smallest rational prime with q_v = 3
        res.exists = !t3.empty() && member(g.compose(d_class, t3_classes[0]));
    }
    return res;
}

long sq_preimage_count(const ClassGroup& g, int target) {
    if (g.trivial())
        return target == 0 ? 1 : 0;
    int k = g.wide_kernel_class();
    long solutions = 0;
    for (int i = 0; i < g.size(); ++i)
        if (g.compose(i, i) == target)
            ++solutions;
    long kernel = (k == g.identity) ? 1 : 2;
    if (solutions % kernel != 0)
        throw Error("square preimage count inconsistency");
    return solutions / kernel;
}

} // namespace hmtheta
