#pragma once

#include "hmtheta/quadfield.hpp"

#include <map>
#include <tuple>
#include <vector>

namespace hmtheta {

// Primitive integral binary quadratic form a x^2 + b xy + c y^2 of
// discriminant d_K.
struct QForm {
    Int a, b, c;
    friend bool operator==(const QForm&, const QForm&) = default;
    friend auto operator<=>(const QForm& f, const QForm& g) {
        return std::tie(f.a, f.b, f.c) <=> std::tie(g.a, g.b, g.c);
    }
};

// The narrow class group Cl^+ of a real quadratic field, realized as the
// cycles of reduced indefinite forms of discriminant d_K.  Composition goes
// through ideal multiplication.  Over Q the group is trivial.
class ClassGroup {
public:
    FieldCtx ctx;
    std::vector<std::vector<QForm>> cycles; // one cycle per class
    std::vector<QForm> reps;                // lexicographically least member
    int identity = 0;

    int size() const { return trivial() ? 1 : static_cast<int>(cycles.size()); }
    bool trivial() const { return ctx.D == 0; }

    int compose(int i, int j) const;
    int inverse(int i) const;
    int power(int i, long e) const;
    int class_of(const FracIdeal& a) const;

    // Representative ideal of a class, as an integral HNF ideal.
    FracIdeal class_ideal(int i) const;

    // Subgroup {x^2} and closures, as sorted index lists.
    std::vector<int> squares_subgroup() const;
    std::vector<int> subgroup_closure(std::vector<int> generators) const;

    // Index of the narrow class of (sqrt d_K); generates the kernel of
    // Cl^+ -> Cl.
    int wide_kernel_class() const;

private:
    std::map<std::tuple<Int, Int, Int>, int> form_class_;
    std::vector<std::vector<int>> table_;
    friend ClassGroup narrow_class_group(const FieldCtx&, long);
    int lookup(QForm f) const;
};

// Builds Cl^+; throws when |d_K| exceeds the bound.
ClassGroup narrow_class_group(const FieldCtx& ctx, long bound = 100000);

// Reduction machinery (exposed for tests).
bool form_is_reduced(const QForm& f, const Int& delta);
QForm form_reduce(QForm f, const Int& delta);
QForm form_rho(const QForm& f, const Int& delta);
std::vector<QForm> reduced_forms(const Int& delta);

struct ClassGroupCriterion {
    bool exists = false;
    int case_no = 0; // 1: |S2|+|S_inf| even, 2: odd
};

// Existence of a triple by the class-group criterion.  Throws when 2 does
// not split completely.
ClassGroupCriterion class_group_criterion(const ClassGroup& g, const std::vector<HalfWeight>& weights);

// |Sq^{-1}(target)| for Sq : Cl -> Cl^+, [a] -> [a^2].
long sq_preimage_count(const ClassGroup& g, int target);

} // namespace hmtheta
