#pragma once

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "yconv/yconv.hpp"

namespace testutil {

using namespace yconv;

/// Same deterministic uniform scheme as the library RNG; seeds are fixed per
/// test so failures replay exactly.
class TestRng {
  public:
    explicit TestRng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : eng_() % n; }
    std::int64_t int_in(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

  private:
    std::mt19937_64 eng_;
};

inline GroupElement random_element(const GroupDescriptor& g, TestRng& rng, std::int64_t radius) {
    switch (g.family) {
        case Family::lattice: {
            GroupElement x(static_cast<std::size_t>(g.param));
            for (auto& c : x) c = rng.int_in(-radius, radius);
            return x;
        }
        case Family::free_group: {
            const std::int64_t len = rng.int_in(0, radius);
            GroupElement w;
            for (std::int64_t i = 0; i < len; ++i) {
                std::int64_t letter;
                do {
                    letter = rng.int_in(1, g.param);
                    if (rng.below(2) == 0) letter = -letter;
                } while (!w.empty() && letter == -w.back());
                w.push_back(letter);
            }
            return w;
        }
        case Family::cyclic: return GroupElement{rng.int_in(0, g.param - 1)};
    }
    return {};
}

enum class ValueKind { unit_interval, dyadic_spread, small_integers };

inline double random_value(TestRng& rng, ValueKind kind) {
    switch (kind) {
        case ValueKind::unit_interval: return 0.1 + 0.9 * rng.uniform();
        case ValueKind::dyadic_spread:
            return std::ldexp(1.0 + rng.uniform(), static_cast<int>(rng.int_in(-6, 6)));
        case ValueKind::small_integers: return static_cast<double>(rng.int_in(1, 8));
    }
    return 1.0;
}

inline RealFn random_real_fn(const GroupDescriptor& g, TestRng& rng, std::int64_t radius,
                             std::int64_t max_points, ValueKind kind = ValueKind::unit_interval) {
    RealFn f(g);
    const std::int64_t n = rng.int_in(1, max_points);
    for (std::int64_t i = 0; i < n; ++i) f.add_at(random_element(g, rng, radius), random_value(rng, kind));
    return f;
}

inline RealFn random_signed_fn(const GroupDescriptor& g, TestRng& rng, std::int64_t radius,
                               std::int64_t max_points) {
    RealFn f(g);
    const std::int64_t n = rng.int_in(1, max_points);
    for (std::int64_t i = 0; i < n; ++i) {
        double v = 0.1 + 0.9 * rng.uniform();
        if (rng.below(2) == 0) v = -v;
        f.add_at(random_element(g, rng, radius), v);
    }
    return f;
}

inline CplxFn random_cplx_fn(const GroupDescriptor& g, TestRng& rng, std::int64_t radius,
                             std::int64_t max_points) {
    CplxFn f(g);
    const std::int64_t n = rng.int_in(1, max_points);
    for (std::int64_t i = 0; i < n; ++i)
        f.add_at(random_element(g, rng, radius),
                 {2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0});
    return f;
}

// ------------------------------------------------------------------- oracles

/// Triple loop over materialized supports with linear-scan lookup; shares no
/// code path with trilinear_form.
inline double brute_trilinear(const RealFn& f1, const RealFn& f2, const RealFn& f3) {
    std::vector<std::pair<GroupElement, double>> a(f1.values().begin(), f1.values().end());
    std::vector<std::pair<GroupElement, double>> b(f2.values().begin(), f2.values().end());
    std::vector<std::pair<GroupElement, double>> c(f3.values().begin(), f3.values().end());
    double total = 0.0;
    for (const auto& [x, v1] : a)
        for (const auto& [y, v2] : b) {
            const GroupElement z = group_add(f1.group(), x, y);
            for (const auto& [w, v3] : c)
                if (w == z) total += v1 * v2 * v3;
        }
    return total;
}

/// Exhaustive minimum over all subsets of the support; valid up to ~20 points.
inline std::size_t brute_concentration(const RealFn& f, double eta, double p) {
    std::vector<double> powers;
    for (const auto& [x, v] : f.values()) powers.push_back(std::pow(v, p));
    const std::size_t n = powers.size();
    double total = 0.0;
    for (double w : powers) total += w;
    std::size_t best = n;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        double outside = 0.0;
        std::size_t size = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::size_t{1} << i)) ++size;
            else outside += powers[i];
        }
        if (outside < eta * total && size < best) best = size;
    }
    return best;
}

/// Integer-set sumset on the line, independent of the group machinery.
inline std::set<std::int64_t> int_sumset(const std::set<std::int64_t>& a, const std::set<std::int64_t>& b) {
    std::set<std::int64_t> out;
    for (std::int64_t x : a)
        for (std::int64_t y : b) out.insert(x + y);
    return out;
}

inline bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

inline bool close_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }

} // namespace testutil
