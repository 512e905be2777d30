#pragma once

#include <cmath>
#include <string>

#include "yconv/sparse.hpp"

namespace yconv {

namespace detail {
inline void check_pair_budget(std::size_t a, std::size_t b, std::size_t limit, const char* what) {
    if (b != 0 && a > limit / b)
        throw resource_limit(std::string(what) + ": support pair count " + std::to_string(a) + "*" +
                             std::to_string(b) + " exceeds limit " + std::to_string(limit));
}
} // namespace detail

/// (f1*f2)(z) = sum over x+y=z of f1(x) f2(y), by support-pair enumeration.
/// Exact on integer data and valid on non-commutative groups.
template <typename T>
SparseFn<T> convolve(const SparseFn<T>& f1, const SparseFn<T>& f2,
                     std::size_t pair_limit = kDefaultPairLimit) {
    if (f1.group() != f2.group()) throw invalid_input("convolve: mixed group descriptors");
    detail::check_pair_budget(f1.support_size(), f2.support_size(), pair_limit, "convolve");
    SparseFn<T> out(f1.group());
    for (const auto& [x, v1] : f1.values())
        for (const auto& [y, v2] : f2.values())
            out.add_at(group_add(f1.group(), x, y), v1 * v2);
    return out;
}

/// <f1*f2, f3> = sum over x,y of f1(x) f2(y) f3(x+y), for nonnegative data.
/// Inner sum runs over supp(f2), so cost is |supp f1| * |supp f2| lookups.
inline double trilinear_form(const RealFn& f1, const RealFn& f2, const RealFn& f3,
                             std::size_t pair_limit = kDefaultPairLimit) {
    if (f1.group() != f2.group() || f1.group() != f3.group())
        throw invalid_input("trilinear_form: mixed group descriptors");
    require_nonnegative(f1, "trilinear_form");
    require_nonnegative(f2, "trilinear_form");
    require_nonnegative(f3, "trilinear_form");
    detail::check_pair_budget(f1.support_size(), f2.support_size(), pair_limit, "trilinear_form");
    double total = 0.0;
    for (const auto& [x, v1] : f1.values()) {
        double inner = 0.0;
        for (const auto& [y, v2] : f2.values())
            inner += v2 * f3.at(group_add(f1.group(), x, y));
        total += v1 * inner;
    }
    return total;
}

/// Ratio against arbitrary norm exponents (each >= 1); used both for proper
/// triples and for the post-reduction exponents (s1, s2, 1).
inline double young_ratio_general(const RealFn& f1, const RealFn& f2, const RealFn& f3,
                                  double q1, double q2, double q3,
                                  std::size_t pair_limit = kDefaultPairLimit) {
    for (const RealFn* f : {&f1, &f2, &f3})
        if (f->empty()) throw invalid_input("young_ratio: zero function");
    const double denom = lp_norm(f1, q1) * lp_norm(f2, q2) * lp_norm(f3, q3);
    return trilinear_form(f1, f2, f3, pair_limit) / denom;
}

/// <f1*f2,f3> / prod_j ||f_j||_{p_j}. At most 1 for conjugate exponents; the
/// triple is a (1-delta)-near extremizer exactly when the ratio is >= 1-delta.
/// Thresholding is left to callers.
inline double young_ratio(const RealFn& f1, const RealFn& f2, const RealFn& f3,
                          const ExponentTriple& p,
                          std::size_t pair_limit = kDefaultPairLimit) {
    return young_ratio_general(f1, f2, f3, p.p1, p.p2, p.p3, pair_limit);
}

/// Exponent bookkeeping for the reduction onto (s1, s2, 1):
///   q = p3', theta = p1/q, phi = p2/q,
///   r1 = (q-p1) p3 / q, r2 = (q-p2) p3 / q, s_j = p_j / r_j.
/// Always 1/s1 + 1/s2 = 1, and r_j in (0, p_j).
struct ReductionPlan {
    double q, theta, phi, r1, r2, s1, s2;
};

inline ReductionPlan reduction_exponents(const ExponentTriple& p) {
    ReductionPlan plan{};
    plan.q = conjugate_exponent(p.p3);
    plan.theta = p.p1 / plan.q;
    plan.phi = p.p2 / plan.q;
    plan.r1 = (plan.q - p.p1) * p.p3 / plan.q;
    plan.r2 = (plan.q - p.p2) * p.p3 / plan.q;
    plan.s1 = p.p1 / plan.r1;
    plan.s2 = p.p2 / plan.r2;
    return plan;
}

/// The powered triple (f1^r1, f2^r2, f3^p3) paired with exponents (s1, s2, 1).
/// Norms carry over as ||g_j||_{s_j} = ||f_j||_{p_j}^{r_j}, and a ratio of
/// 1-delta for the input yields at least (1-delta)^{p3} for the output.
struct ReducedTriple {
    RealFn g1, g2, g3;
    double s1, s2;
    ReductionPlan plan;
};

inline ReducedTriple reduce_triple(const RealFn& f1, const RealFn& f2, const RealFn& f3,
                                   const ExponentTriple& p) {
    for (const RealFn* f : {&f1, &f2, &f3})
        if (f->empty()) throw invalid_input("reduce_triple: zero function");
    const ReductionPlan plan = reduction_exponents(p);
    return ReducedTriple{pointwise_power(f1, plan.r1), pointwise_power(f2, plan.r2),
                         pointwise_power(f3, p.p3), plan.s1, plan.s2, plan};
}

} // namespace yconv
