#pragma once

#include "hmtheta/classgroup.hpp"

#include <optional>
#include <string>

namespace hmtheta {

struct ExistenceReport {
    bool exists = false;
    std::string case_label; // "C1", "C2", "C3" or "case1"/"case2"
    std::optional<GTriple> witness;
    std::optional<long> class_count;
};

// Smallest-u representations N = u^2 + v^2 resp. N = 3u^2 + v^2 over
// nonnegative integers.
std::optional<std::pair<Int, Int>> two_squares(const Int& N);
std::optional<std::pair<Int, Int>> three_u2_v2(const Int& N);

// The congruence criterion: a square-free N is represented iff none of its
// prime factors is inert in Q(i) (which = 1) resp. Q(sqrt -3) (which = 3).
bool norm_criterion(const Int& N, int which);

// The three congruence conditions on D = 1 mod 8.
ExistenceReport quadratic_criteria(const FieldCtx& ctx, const std::vector<HalfWeight>& weights);

// Checks the defining conditions: beta totally positive, S3 inside T3, the
// ideal identity (8 beta) d prod p_v = a^2, and the parity condition.
bool is_in_G(const FieldCtx& ctx, const GTriple& t);

// Rescale by a totally positive gamma so that ord_v a = 0 on S2 u S3.
GTriple normalize_triple(const FieldCtx& ctx, const GTriple& t);

// One witness triple (or none): the direct constructions over Q, and the
// rho-based construction from D = u^2+v^2 / 3u^2+v^2 over quadratic fields.
std::optional<GTriple> construct_triple(const FieldCtx& ctx,
                                        const std::vector<HalfWeight>& weights);

// All S3 subsets of T3 satisfying the parity condition.
std::vector<std::vector<PrimePlace>> admissible_s3_sets(const FieldCtx& ctx,
                                                        const std::vector<HalfWeight>& weights);

// One verified triple per equivalence class with the given S3, via the
// class group.  Empty when no triple with this S3 exists.
std::vector<GTriple> witnesses_for_s3(const FieldCtx& ctx, const ClassGroup& cg,
                                      const std::vector<HalfWeight>& weights,
                                      const std::vector<PrimePlace>& s3);

// [E^+ : E^2] * sum over admissible S3 of |Sq^{-1}([d prod p_v])|.
long equiv_classes(const FieldCtx& ctx, const ClassGroup& cg,
                   const std::vector<HalfWeight>& weights);

bool triples_equivalent(const FieldCtx& ctx, const GTriple& t1, const GTriple& t2);

} // namespace hmtheta
