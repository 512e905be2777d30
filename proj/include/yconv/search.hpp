#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "yconv/stability.hpp"
#include "yconv/young.hpp"

namespace yconv {

// ---------------------------------------------------------------- reproducible randomness

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stream seed for run number `stream` under a master seed; distinct streams
/// decorrelate and the whole scheme is platform-independent.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0x632be59bd9b4e019ULL * (stream + 1));
    return splitmix64_next(s);
}

/// Deterministic RNG: the engine sequence is pinned by the standard and the
/// double conversion avoids std::uniform_real_distribution, whose output is
/// implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; } // [0,1)
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : eng_() % n; }

  private:
    std::mt19937_64 eng_;
};

// ---------------------------------------------------------------- search plumbing

struct SearchConfig {
    FiniteSubset window;
    ExponentTriple exponents;
    std::int64_t max_iters = 200;
    double convergence_tol = 1e-12;
    std::uint64_t seed = 1;

    SearchConfig(FiniteSubset w, ExponentTriple p) : window(std::move(w)), exponents(p) {}
};

inline void validate(const SearchConfig& cfg) {
    if (cfg.window.empty()) throw invalid_input("SearchConfig: empty window");
    if (cfg.max_iters < 1) throw invalid_input("SearchConfig: max_iters must be >= 1");
    if (!(cfg.convergence_tol > 0.0)) throw invalid_input("SearchConfig: convergence_tol must be > 0");
}

using ParamValue = std::variant<std::int64_t, double, std::string, bool>;

/// One experiment outcome. wall_time is informational and is excluded from
/// the default serialization so records are reproducible byte-for-byte.
struct ExperimentRecord {
    std::string experiment_name;
    std::map<std::string, ParamValue> parameters;
    double ratio = 0.0;
    std::vector<double> t_values;              // per function, ||.||_inf / ||.||_p
    std::vector<std::int64_t> concentration_N; // per function, at the record's eta
    std::int64_t iterations_used = 0;
    bool is_torsion_free = true;
    double wall_time = 0.0; // seconds
};

namespace detail {

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

inline void fill_triple_stats(ExperimentRecord& rec, const RealFn& f1, const RealFn& f2,
                              const RealFn& f3, const ExponentTriple& p, double eta) {
    rec.t_values.clear();
    rec.concentration_N.clear();
    const RealFn* fs[3] = {&f1, &f2, &f3};
    for (int j = 0; j < 3; ++j) {
        const double pj = p.at(j);
        rec.t_values.push_back(lp_norm(*fs[j], kInfExponent) / lp_norm(*fs[j], pj));
        rec.concentration_N.push_back(static_cast<std::int64_t>(concentration(*fs[j], eta, pj).N));
    }
}

// Window-restricted partner functions of the trilinear form: each is the
// linear functional's kernel against which one slot is paired, so the
// duality-optimal response in slot j is partner_j^(p_j' - 1), normalized.
// The divisions x = z + (-y) and y = (-x) + z are written to stay correct on
// non-commutative groups.

inline RealFn form_partner_1(const RealFn& f2, const RealFn& f3, const FiniteSubset& window) {
    RealFn h(f2.group());
    check_pair_budget(f2.support_size(), f3.support_size(), kDefaultPairLimit, "alternating_ascent");
    for (const auto& [y, v2] : f2.values())
        for (const auto& [z, v3] : f3.values()) {
            GroupElement x = group_add(f2.group(), z, group_neg(f2.group(), y));
            if (window.contains(x)) h.add_at(x, v2 * v3);
        }
    return h;
}

inline RealFn form_partner_2(const RealFn& f1, const RealFn& f3, const FiniteSubset& window) {
    RealFn h(f1.group());
    check_pair_budget(f1.support_size(), f3.support_size(), kDefaultPairLimit, "alternating_ascent");
    for (const auto& [x, v1] : f1.values())
        for (const auto& [z, v3] : f3.values()) {
            GroupElement y = group_add(f1.group(), group_neg(f1.group(), x), z);
            if (window.contains(y)) h.add_at(y, v1 * v3);
        }
    return h;
}

inline RealFn form_partner_3(const RealFn& f1, const RealFn& f2, const FiniteSubset& window) {
    RealFn h(f1.group());
    check_pair_budget(f1.support_size(), f2.support_size(), kDefaultPairLimit, "alternating_ascent");
    for (const auto& [x, v1] : f1.values())
        for (const auto& [y, v2] : f2.values()) {
            GroupElement z = group_add(f1.group(), x, y);
            if (window.contains(z)) h.add_at(z, v1 * v2);
        }
    return h;
}

inline RealFn duality_response(const RealFn& partner, double p, int index) {
    if (partner.empty())
        throw degenerate_input("alternating_ascent: response for function " + std::to_string(index) +
                               " collapsed to zero on the window");
    RealFn powered = pointwise_power(partner, conjugate_exponent(p) - 1.0);
    return scaled(powered, 1.0 / lp_norm(powered, p));
}

} // namespace detail

// ---------------------------------------------------------------- alternating ascent

struct AscentResult {
    RealFn f1, f2, f3;
    std::vector<double> ratio_history; // ratio after each full update cycle
    std::int64_t iterations_used = 0;
};

/// Cyclic best-response maximization of the convolution form over the product
/// of unit p_j-balls supported in cfg.window. Each slot update is the exact
/// argmax given the other two, so the per-cycle ratios never decrease.
inline AscentResult alternating_ascent(const RealFn& init1, const RealFn& init2, const RealFn& init3,
                                       const SearchConfig& cfg) {
    validate(cfg);
    const ExponentTriple& p = cfg.exponents;
    const RealFn* inits[3] = {&init1, &init2, &init3};
    for (const RealFn* f : inits) {
        if (f->empty()) throw invalid_input("alternating_ascent: zero initial function");
        require_nonnegative(*f, "alternating_ascent");
        if (f->group() != cfg.window.group)
            throw invalid_input("alternating_ascent: function and window descriptors differ");
        for (const auto& [x, v] : f->values())
            if (!cfg.window.contains(x))
                throw invalid_input("alternating_ascent: initial support leaves the window");
    }

    RealFn f1 = scaled(init1, 1.0 / lp_norm(init1, p.p1));
    RealFn f2 = scaled(init2, 1.0 / lp_norm(init2, p.p2));
    RealFn f3 = scaled(init3, 1.0 / lp_norm(init3, p.p3));

    AscentResult res{f1, f2, f3, {}, 0};
    double prev = young_ratio(f1, f2, f3, p);
    for (std::int64_t it = 0; it < cfg.max_iters; ++it) {
        f1 = detail::duality_response(detail::form_partner_1(f2, f3, cfg.window), p.p1, 1);
        f2 = detail::duality_response(detail::form_partner_2(f1, f3, cfg.window), p.p2, 2);
        f3 = detail::duality_response(detail::form_partner_3(f1, f2, cfg.window), p.p3, 3);
        const double r = young_ratio(f1, f2, f3, p);
        res.ratio_history.push_back(r);
        res.iterations_used = it + 1;
        const bool converged = std::abs(r - prev) < cfg.convergence_tol;
        prev = r;
        if (converged) break;
    }
    res.f1 = std::move(f1);
    res.f2 = std::move(f2);
    res.f3 = std::move(f3);
    return res;
}

// ---------------------------------------------------------------- named experiments

/// The box family on the integer line: all three functions the indicator of
/// [-N, N]. The form is exactly 3N^2+3N+1 and the ratio (3N^2+3N+1)/(2N+1)^2
/// decreases to 3/4, witnessing that spreading costs only a bounded factor.
inline ExperimentRecord interval_example(std::int64_t N, const ExponentTriple& p) {
    if (N < 1) throw invalid_input("interval_example: N must be >= 1");
    if (N > 2'000'000) throw resource_limit("interval_example: N beyond supported range 2000000");
    detail::Stopwatch timer;

    const std::int64_t form = 3 * N * N + 3 * N + 1;
    const std::int64_t denom = (2 * N + 1) * (2 * N + 1);
    const double width = static_cast<double>(2 * N + 1);

    ExperimentRecord rec;
    rec.experiment_name = "interval";
    rec.parameters["N"] = N;
    rec.parameters["form"] = form;
    rec.parameters["denominator"] = denom;
    rec.parameters["eta"] = 0.1;
    rec.parameters["p1"] = p.p1;
    rec.parameters["p2"] = p.p2;
    rec.parameters["p3"] = p.p3;
    rec.ratio = static_cast<double>(form) / static_cast<double>(denom);
    rec.is_torsion_free = true;

    const RealFn box = indicator(lattice_box(1, N));
    detail::fill_triple_stats(rec, box, box, box, p, 0.1);
    // the exact sup-to-norm parameter, bypassing pow-of-pow round-off
    for (int j = 0; j < 3; ++j) rec.t_values[static_cast<std::size_t>(j)] = std::pow(width, -1.0 / p.at(j));
    rec.wall_time = timer.seconds();
    return rec;
}

/// Indicator of the subgroup generated by `generator` in the cyclic group:
/// 1_H * 1_H = |H| 1_H, so the ratio is exactly 1 while the mass sits on |H|
/// points. This is the torsion obstruction; the record is flagged accordingly.
inline ExperimentRecord torsion_control(std::int64_t n, std::int64_t generator,
                                        const ExponentTriple& p = ExponentTriple(1.5, 1.5, 1.5),
                                        double eta = 0.1) {
    detail::Stopwatch timer;
    const GroupDescriptor g = GroupDescriptor::cyclic(n);
    const std::int64_t gen = mod_residue(generator, n);

    std::vector<GroupElement> members;
    std::int64_t cur = 0;
    do {
        members.push_back(GroupElement{cur});
        cur = mod_residue(cur + gen, n);
    } while (cur != 0);
    const FiniteSubset H = make_subset(g, std::move(members));

    const RealFn f = indicator(H);
    ExperimentRecord rec;
    rec.experiment_name = "torsion";
    rec.parameters["n"] = n;
    rec.parameters["generator"] = gen;
    rec.parameters["subgroup_size"] = static_cast<std::int64_t>(H.size());
    rec.parameters["eta"] = eta;
    rec.parameters["p1"] = p.p1;
    rec.parameters["p2"] = p.p2;
    rec.parameters["p3"] = p.p3;
    rec.ratio = young_ratio(f, f, f, p);
    rec.is_torsion_free = g.is_torsion_free();
    detail::fill_triple_stats(rec, f, f, f, p, eta);
    rec.wall_time = timer.seconds();
    return rec;
}

// ---------------------------------------------------------------- constrained curve scan

namespace detail {

/// Rescale the largest values of f (a shared flattened level, extending the
/// plain rescale-the-max projection when that alone would invert the order)
/// so that ||f||_inf / ||f||_p equals t. When t is below what the support
/// could ever realize, fall back to the flat profile on the window and report
/// the t actually achieved.
inline RealFn project_sup_ratio(const RealFn& f, double p, double t, const FiniteSubset& window,
                                double& achieved_t) {
    if (f.empty()) throw degenerate_input("project_sup_ratio: zero function");
    if (t >= 1.0) {
        // single point mass is the only shape with t = 1
        auto best = f.values().begin();
        for (auto it = f.values().begin(); it != f.values().end(); ++it)
            if (it->second > best->second) best = it;
        achieved_t = 1.0;
        return delta(f.group(), best->first, 1.0);
    }

    std::vector<std::pair<double, GroupElement>> pts;
    pts.reserve(f.support_size());
    for (const auto& [x, v] : f.values()) pts.emplace_back(v, x);
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    const std::size_t n = pts.size();
    std::vector<double> suffix(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + std::pow(pts[i].first, p);

    const double tp = std::pow(t, p);
    for (std::size_t j = 1; j < n; ++j) {
        const double denom = 1.0 - static_cast<double>(j) * tp;
        if (denom <= 0.0) break;
        if (suffix[j] <= 0.0) break;
        const double level = t * std::pow(suffix[j] / denom, 1.0 / p);
        if (level >= pts[j].first) {
            RealFn out = f;
            for (std::size_t i = 0; i < j; ++i) out.set(pts[i].second, level);
            achieved_t = t;
            return out;
        }
    }

    achieved_t = std::pow(static_cast<double>(window.size()), -1.0 / p);
    return indicator(window);
}

struct ConstrainedRun {
    double best_ratio = 0.0;
    RealFn f1, f2, f3;
    double achieved_t = 0.0;
    std::int64_t iterations = 0;
};

inline ConstrainedRun run_constrained_ascent(RealFn f1, RealFn f2, RealFn f3, const ExponentTriple& p,
                                             double t, const SearchConfig& cfg) {
    double achieved = 0.0;
    f1 = project_sup_ratio(f1, p.p1, t, cfg.window, achieved);
    f1 = scaled(f1, 1.0 / lp_norm(f1, p.p1));
    f2 = scaled(f2, 1.0 / lp_norm(f2, p.p2));
    f3 = scaled(f3, 1.0 / lp_norm(f3, p.p3));

    ConstrainedRun run{young_ratio(f1, f2, f3, p), f1, f2, f3, achieved, 0};
    double prev = run.best_ratio;
    for (std::int64_t it = 0; it < cfg.max_iters; ++it) {
        f1 = duality_response(form_partner_1(f2, f3, cfg.window), p.p1, 1);
        f1 = project_sup_ratio(f1, p.p1, t, cfg.window, achieved);
        f1 = scaled(f1, 1.0 / lp_norm(f1, p.p1));
        f2 = duality_response(form_partner_2(f1, f3, cfg.window), p.p2, 2);
        f3 = duality_response(form_partner_3(f1, f2, cfg.window), p.p3, 3);
        const double r = young_ratio(f1, f2, f3, p);
        run.iterations = it + 1;
        if (r > run.best_ratio) {
            run.best_ratio = r;
            run.f1 = f1;
            run.f2 = f2;
            run.f3 = f3;
            run.achieved_t = achieved;
        }
        if (std::abs(r - prev) < cfg.convergence_tol) break;
        prev = r;
    }
    return run;
}

inline RealFn random_window_function(const FiniteSubset& window, Rng& rng, std::uint64_t max_points) {
    RealFn f(window.group);
    const std::uint64_t count = 1 + rng.below(max_points);
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto& x = window.elements[static_cast<std::size_t>(rng.below(window.size()))];
        f.add_at(x, 0.1 + 0.9 * rng.uniform());
    }
    return f;
}

inline std::int64_t window_radius(const FiniteSubset& window) {
    std::int64_t radius = 0;
    for (const auto& x : window.elements)
        for (std::int64_t c : x) radius = std::max(radius, std::abs(c));
    return radius;
}

} // namespace detail

/// For each target t, the best ratio found over triples whose first function
/// satisfies ||f1||_inf / ||f1||_p1 = t. Seeds: the box family whose width
/// matches t (integer line only), plus seeded random restarts; each ascent
/// step re-projects f1 onto the constraint.
inline std::vector<ExperimentRecord> curve_scan(const ExponentTriple& p, const std::vector<double>& t_grid,
                                                const SearchConfig& cfg, std::int64_t restarts = 16) {
    validate(cfg);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0) || t_grid[i] > 1.0)
            throw invalid_input("curve_scan: t values must lie in (0,1]");
        if (i > 0 && t_grid[i] < t_grid[i - 1])
            throw invalid_input("curve_scan: t grid must be ascending");
    }
    const bool integer_line = cfg.window.group.family == Family::lattice && cfg.window.group.param == 1;
    const std::int64_t radius = detail::window_radius(cfg.window);

    std::vector<ExperimentRecord> records;
    for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
        const double t = t_grid[ti];
        detail::Stopwatch timer;

        std::vector<std::array<RealFn, 3>> seeds;
        if (integer_line) {
            // width whose flat profile hits t: (2N+1)^(-1/p1) = t
            std::int64_t N = static_cast<std::int64_t>(
                std::llround((std::pow(t, -p.p1) - 1.0) / 2.0));
            N = std::clamp<std::int64_t>(N, 0, radius);
            const RealFn box = indicator(lattice_box(1, N));
            seeds.push_back({box, box, box});
        }
        Rng rng(derive_seed(cfg.seed, 0x1000 + ti));
        for (std::int64_t r = 0; r < restarts; ++r)
            seeds.push_back({detail::random_window_function(cfg.window, rng, 5),
                             detail::random_window_function(cfg.window, rng, 5),
                             detail::random_window_function(cfg.window, rng, 5)});

        bool have = false;
        detail::ConstrainedRun best{0.0, RealFn(cfg.window.group), RealFn(cfg.window.group),
                                    RealFn(cfg.window.group), 0.0, 0};
        std::int64_t total_iters = 0;
        for (auto& seed : seeds) {
            try {
                detail::ConstrainedRun run =
                    detail::run_constrained_ascent(seed[0], seed[1], seed[2], p, t, cfg);
                total_iters += run.iterations;
                if (!have || run.best_ratio > best.best_ratio) {
                    best = std::move(run);
                    have = true;
                }
            } catch (const degenerate_input&) {
                // collapsed run contributes nothing
            }
        }
        if (!have) throw degenerate_input("curve_scan: every seed collapsed at t grid point");

        ExperimentRecord rec;
        rec.experiment_name = "curve";
        rec.parameters["t_target"] = t;
        rec.parameters["t_achieved"] = best.achieved_t;
        rec.parameters["restarts"] = restarts;
        rec.parameters["seed"] = static_cast<std::int64_t>(cfg.seed);
        rec.parameters["window_size"] = static_cast<std::int64_t>(cfg.window.size());
        rec.parameters["eta"] = 0.1;
        rec.parameters["p1"] = p.p1;
        rec.parameters["p2"] = p.p2;
        rec.parameters["p3"] = p.p3;
        rec.ratio = best.best_ratio;
        rec.iterations_used = total_iters;
        rec.is_torsion_free = cfg.window.group.is_torsion_free();
        detail::fill_triple_stats(rec, best.f1, best.f2, best.f3, p, 0.1);
        rec.wall_time = timer.seconds();
        records.push_back(std::move(rec));
    }
    return records;
}

// ---------------------------------------------------------------- doubling scan

/// Population scan behind the concentration story: structured families plus
/// many seeded ascent runs; every triple whose ratio reaches 1 - delta_max is
/// recorded together with its per-function concentration counts at eta. On
/// torsion-free groups the near-extremal records should all show counts of 1;
/// a counterexample would be a doubling-obstruction witness.
inline std::vector<ExperimentRecord> doubling_scan(const ExponentTriple& p, double eta, double delta_max,
                                                   const SearchConfig& cfg, std::int64_t runs = 200) {
    validate(cfg);
    if (!(eta > 0.0) || !(eta < 1.0)) throw invalid_input("doubling_scan: eta must lie in (0,1)");
    if (!(delta_max > 0.0) || !(delta_max < 1.0))
        throw invalid_input("doubling_scan: delta_max must lie in (0,1)");

    const GroupDescriptor g = cfg.window.group;
    std::vector<ExperimentRecord> records;

    auto emit = [&](const std::string& family, std::int64_t index, double ratio, const RealFn& f1,
                    const RealFn& f2, const RealFn& f3, std::int64_t iters, double secs) {
        const double delta = std::max(0.0, 1.0 - ratio);
        if (delta > delta_max) return;
        ExperimentRecord rec;
        rec.experiment_name = "doubling";
        rec.parameters["family"] = family;
        rec.parameters["run"] = index;
        rec.parameters["delta"] = delta;
        rec.parameters["eta"] = eta;
        rec.parameters["delta_max"] = delta_max;
        rec.parameters["seed"] = static_cast<std::int64_t>(cfg.seed);
        rec.parameters["window_size"] = static_cast<std::int64_t>(cfg.window.size());
        rec.parameters["p1"] = p.p1;
        rec.parameters["p2"] = p.p2;
        rec.parameters["p3"] = p.p3;
        rec.ratio = ratio;
        rec.iterations_used = iters;
        rec.is_torsion_free = g.is_torsion_free();
        detail::fill_triple_stats(rec, f1, f2, f3, p, eta);
        rec.parameters["max_N"] = *std::max_element(rec.concentration_N.begin(), rec.concentration_N.end());
        rec.parameters["min_N"] = *std::min_element(rec.concentration_N.begin(), rec.concentration_N.end());
        rec.wall_time = secs;
        records.push_back(std::move(rec));
    };

    // structured family: aligned point masses (the exact extremizers)
    {
        detail::Stopwatch timer;
        const RealFn d0 = delta(g, identity(g));
        emit("delta", 0, young_ratio(d0, d0, d0, p), d0, d0, d0, 0, timer.seconds());
    }
    if (!cfg.window.elements.empty() && cfg.window.elements.front() != identity(g)) {
        detail::Stopwatch timer;
        const GroupElement a = cfg.window.elements.front();
        const RealFn da = delta(g, a);
        const RealFn d0 = delta(g, identity(g));
        const RealFn dsum = delta(g, a); // a + 0 = a
        emit("delta", 1, young_ratio(da, d0, dsum, p), da, d0, dsum, 0, timer.seconds());
    }

    // structured family: boxes on the integer line
    if (g.family == Family::lattice && g.param == 1) {
        const std::int64_t radius = std::min<std::int64_t>(detail::window_radius(cfg.window), 200);
        for (std::int64_t N = 1; N <= radius; ++N) {
            detail::Stopwatch timer;
            const RealFn box = indicator(lattice_box(1, N));
            emit("interval", N, young_ratio(box, box, box, p), box, box, box, 0, timer.seconds());
        }
    }

    // seeded ascent population
    for (std::int64_t run = 0; run < runs; ++run) {
        detail::Stopwatch timer;
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(run)));
        SearchConfig run_cfg = cfg;
        run_cfg.exponents = p;
        try {
            AscentResult res = alternating_ascent(detail::random_window_function(cfg.window, rng, 5),
                                                  detail::random_window_function(cfg.window, rng, 5),
                                                  detail::random_window_function(cfg.window, rng, 5),
                                                  run_cfg);
            const double ratio = res.ratio_history.empty() ? 0.0 : res.ratio_history.back();
            emit("ascent", run, ratio, res.f1, res.f2, res.f3, res.iterations_used, timer.seconds());
        } catch (const degenerate_input&) {
            // a collapsed run records nothing; the run still counts as executed
        }
    }
    return records;
}

} // namespace yconv
