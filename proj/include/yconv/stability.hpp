#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "yconv/sparse.hpp"

namespace yconv {

namespace detail {
inline void check_open_exponent(double p, const char* what) {
    if (!(p > 1.0) || std::isinf(p)) throw invalid_input(std::string(what) + ": p must lie in (1,inf)");
}
} // namespace detail

/// Uniform-convexity gap. For p >= 2:
///   2^(p-1) (||f||_p^p + ||g||_p^p) - ||f+g||_p^p - ||f-g||_p^p,
/// for p < 2, with q = p/(p-1):
///   2 (||f||_p^p + ||g||_p^p)^(q-1) - ||f+g||_p^q - ||f-g||_p^q.
/// Nonnegative in both regimes; zero iff the pair sits on the equality case.
template <typename T>
double clarkson_gap(const SparseFn<T>& f, const SparseFn<T>& g, double p) {
    if (f.group() != g.group()) throw invalid_input("clarkson_gap: mixed group descriptors");
    detail::check_open_exponent(p, "clarkson_gap");
    const double fp = std::pow(lp_norm(f, p), p);
    const double gp = std::pow(lp_norm(g, p), p);
    const double sum_p = std::pow(lp_norm(add(f, g), p), p);
    const double diff_p = std::pow(lp_norm(sub(f, g), p), p);
    if (p >= 2.0) {
        const double c = std::pow(2.0, p - 1.0);
        return c * (fp + gp) - sum_p - diff_p;
    }
    const double q = p / (p - 1.0);
    return 2.0 * std::pow(fp + gp, q - 1.0) - std::pow(sum_p, q / p) - std::pow(diff_p, q / p);
}

/// The two sides of the convexity-based closeness estimate:
///   hypothesis_eps   = 1 - ||f+g||_p^p / (2^(p-1)(||f||_p^p + ||g||_p^p))
///   distance_measure = ||f-g||_p^p / (||f||_p^p + ||g||_p^p)
/// Small eps forces small distance; callers plot one against the other.
struct PhewDiscrepancy {
    double hypothesis_eps = 0.0;
    double distance_measure = 0.0;
};

template <typename T>
PhewDiscrepancy phew_discrepancy(const SparseFn<T>& f, const SparseFn<T>& g, double p) {
    if (f.group() != g.group()) throw invalid_input("phew_discrepancy: mixed group descriptors");
    detail::check_open_exponent(p, "phew_discrepancy");
    const double fp = std::pow(lp_norm(f, p), p);
    const double gp = std::pow(lp_norm(g, p), p);
    if (fp + gp == 0.0) throw invalid_input("phew_discrepancy: both functions vanish");
    PhewDiscrepancy out;
    out.hypothesis_eps = 1.0 - std::pow(lp_norm(add(f, g), p), p) / (std::pow(2.0, p - 1.0) * (fp + gp));
    out.distance_measure = std::pow(lp_norm(sub(f, g), p), p) / (fp + gp);
    return out;
}

/// Value and residual of one family member against the norming functional of F.
struct NormingValue {
    double s = 0.0;        // l(f / ||f||_p), always in [-1, 1]
    double residual = 0.0; // || f/||f||_p - s * F/||F||_p ||_p
};

/// The norming functional of a nonnegative F in l^p is the duality map
///   l(g) = sum g * F^(p-1) / ||F||_p^(p-1),
/// the unique unit functional with l(F) = ||F||_p. Returns s_i = l(F_i) and
/// the residual ||F_i - s_i F/||F||_p||_p for each normalized member F_i.
inline std::vector<NormingValue> norming_values(const RealFn& F, const std::vector<RealFn>& family,
                                                double p) {
    detail::check_open_exponent(p, "norming_values");
    require_nonnegative(F, "norming_values");
    if (F.empty()) throw invalid_input("norming_values: zero reference function");

    const double f_norm = lp_norm(F, p);
    const RealFn weight = pointwise_power(F, p - 1.0); // l's representing kernel, un-normalized
    const double denom = std::pow(f_norm, p - 1.0);

    std::vector<NormingValue> out;
    out.reserve(family.size());
    for (const auto& fi : family) {
        if (fi.group() != F.group()) throw invalid_input("norming_values: mixed group descriptors");
        if (fi.empty()) throw invalid_input("norming_values: zero family member");
        const double ni = lp_norm(fi, p);
        double dot = 0.0;
        for (const auto& [x, w] : weight.values()) dot += fi.at(x) * w;
        NormingValue nv;
        nv.s = dot / (denom * ni);
        RealFn diff = sub(scaled(fi, 1.0 / ni), scaled(F, nv.s / f_norm));
        nv.residual = lp_norm(diff, p);
        out.push_back(nv);
    }
    return out;
}

/// Convexity exponent used to turn a deficit delta into a closeness scale.
/// For p >= 2 the gap inequality is linear in the deficit; below 2 a smaller
/// exponent is used. Both are configurable defaults, not asserted constants.
inline double default_gamma(double p) { return p >= 2.0 ? 1.0 : 2.0 / (p + 2.0); }

/// Split of a family by alignment with its normalized sum F. Members whose
/// residual against the norming direction is below eta * ||f_i||_p land in
/// s_prime; the rest carry at most an epsilon_delta fraction of the total
/// norm mass.
struct PartitionResult {
    std::vector<std::size_t> s_prime;
    std::vector<std::size_t> s_double_prime;
    RealFn F; // normalized sum of the family
    std::map<std::size_t, double> s_values;       // index -> l(F_i)
    std::map<std::size_t, double> residual_norms; // index -> ||f_i - l(f_i) F||_p
    double eta_used = 0.0;
    double epsilon_delta = 0.0;
    double delta_used = 0.0;
    double gamma_used = 0.0;
};

inline constexpr double kMinPartitionDelta = 1e-15;

/// Partition by the residual criterion with eta = delta^(gamma/(1+gamma)).
/// delta defaults to the measured defect 1 - ||sum f_i||_p / sum ||f_i||_p
/// (floored away from zero so aligned families get a positive eta and an
/// empty s_double_prime). epsilon_delta is the larger of 2*eta and the mass
/// fraction actually stranded in s_double_prime.
inline PartitionResult convexity_partition(const std::vector<RealFn>& family, double p,
                                           double delta_hint = std::numeric_limits<double>::quiet_NaN(),
                                           double gamma = std::numeric_limits<double>::quiet_NaN()) {
    detail::check_open_exponent(p, "convexity_partition");
    if (family.empty()) throw invalid_input("convexity_partition: empty family");

    std::vector<double> norms(family.size());
    double total = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
        require_nonnegative(family[i], "convexity_partition");
        if (i > 0 && family[i].group() != family[0].group())
            throw invalid_input("convexity_partition: mixed group descriptors");
        norms[i] = lp_norm(family[i], p);
        total += norms[i];
    }
    if (total == 0.0) throw invalid_input("convexity_partition: all-zero family");

    RealFn sum(family[0].group());
    for (const auto& fi : family) sum = add(sum, fi);
    const double sum_norm = lp_norm(sum, p);

    double delta = std::isnan(delta_hint) ? 1.0 - sum_norm / total : delta_hint;
    delta = std::max(delta, kMinPartitionDelta);
    const double g = std::isnan(gamma) ? default_gamma(p) : gamma;
    if (!(g > 0.0)) throw invalid_input("convexity_partition: gamma must be > 0");
    const double eta = std::pow(delta, g / (1.0 + g));

    PartitionResult res{{}, {}, scaled(sum, 1.0 / sum_norm), {}, {}, eta, 0.0, delta, g};

    const RealFn weight = pointwise_power(res.F, p - 1.0); // ||F||_p = 1, so l(g) = <g, F^(p-1)>
    double stranded = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (norms[i] == 0.0) {
            res.s_double_prime.push_back(i);
            res.s_values[i] = 0.0;
            res.residual_norms[i] = 0.0;
            continue;
        }
        double dot = 0.0;
        for (const auto& [x, w] : weight.values()) dot += family[i].at(x) * w;
        const double s_i = dot / norms[i];
        const double residual = lp_norm(sub(family[i], scaled(res.F, dot)), p);
        res.s_values[i] = s_i;
        res.residual_norms[i] = residual;
        if (residual < eta * norms[i]) {
            res.s_prime.push_back(i);
        } else {
            res.s_double_prime.push_back(i);
            stranded += norms[i];
        }
    }
    res.epsilon_delta = std::max(2.0 * eta, stranded / total);
    return res;
}

/// How many points are needed to carry all but an eta-fraction of ||f||_p^p.
struct ConcentrationReport {
    std::size_t N = 0;          // minimal |B| with strict mass condition
    FiniteSubset witness_set;   // a minimizing B (greedy, largest values first)
    double eta = 0.0;
    double p = 0.0;
    double removed_mass_fraction = 0.0; // p-mass fraction inside witness_set
};

/// Minimal |B| such that the p-mass outside B is strictly below
/// eta * ||f||_p^p. Removing the largest values first is optimal for this
/// objective, so the greedy count is exact.
inline ConcentrationReport concentration(const RealFn& f, double eta, double p) {
    if (!(eta > 0.0) || !(eta < 1.0)) throw invalid_input("concentration: eta must lie in (0,1)");
    if (!(p >= 1.0) || std::isinf(p)) throw invalid_input("concentration: p must lie in [1,inf)");
    require_nonnegative(f, "concentration");
    if (f.empty()) throw invalid_input("concentration: zero function");

    std::vector<std::pair<double, GroupElement>> pts;
    pts.reserve(f.support_size());
    for (const auto& [x, v] : f.values()) pts.emplace_back(std::pow(v, p), x);
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    // suffix[k] = mass remaining after deleting the k largest points
    std::vector<double> suffix(pts.size() + 1, 0.0);
    for (std::size_t i = pts.size(); i-- > 0;) suffix[i] = suffix[i + 1] + pts[i].first;
    const double total = suffix[0];

    std::size_t n = 0;
    while (n <= pts.size() && !(suffix[n] < eta * total)) ++n;

    ConcentrationReport rep;
    rep.N = n;
    rep.eta = eta;
    rep.p = p;
    rep.removed_mass_fraction = (total - suffix[n]) / total;
    std::vector<GroupElement> witness;
    witness.reserve(n);
    for (std::size_t i = 0; i < n; ++i) witness.push_back(pts[i].second);
    rep.witness_set = make_subset(f.group(), std::move(witness));
    return rep;
}

/// Candidates u whose translate of f^r stays within 2*eta*||f^r||_s of f^r.
/// The identity always qualifies and is always included.
inline FiniteSubset stability_translate_set(const RealFn& f, const FiniteSubset& candidates,
                                            double r, double s, double eta) {
    if (f.group() != candidates.group)
        throw invalid_input("stability_translate_set: mixed group descriptors");
    require_nonnegative(f, "stability_translate_set");
    if (f.empty()) throw invalid_input("stability_translate_set: zero function");
    if (!(r > 0.0)) throw invalid_input("stability_translate_set: power r must be > 0");

    const RealFn g = pointwise_power(f, r);
    const double threshold = 2.0 * eta * lp_norm(g, s);

    std::vector<GroupElement> kept;
    kept.push_back(identity(f.group()));
    for (const auto& u : candidates.elements)
        if (lp_norm(sub(translate(g, u), g), s) <= threshold) kept.push_back(u);
    return make_subset(f.group(), std::move(kept));
}

} // namespace yconv
