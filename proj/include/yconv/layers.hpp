#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "yconv/sparse.hpp"

namespace yconv {

/// One dyadic layer: points = {x : 2^k <= f(x) < 2^(k+1)} and the profile
/// F_k = f / 2^k on those points, so 1 <= F_k < 2 pointwise.
struct Layer {
    std::int64_t level = 0;
    FiniteSubset points;
    RealFn profile;

    Layer(std::int64_t k, FiniteSubset pts, RealFn prof)
        : level(k), points(std::move(pts)), profile(std::move(prof)) {}
};

/// Layers of a nonnegative function, ordered by increasing level, plus a
/// copy of the source so selection ratios can be formed later at any p.
struct LayerDecomposition {
    RealFn source;
    std::vector<Layer> layers;

    explicit LayerDecomposition(RealFn src) : source(std::move(src)) {}

    double source_norm(double p) const { return lp_norm(source, p); }

    /// Sum of 2^k F_k over layers; reconstructs the source to round-off.
    RealFn reconstruct() const {
        RealFn out(source.group());
        for (const auto& layer : layers)
            for (const auto& [x, v] : layer.profile.values())
                out.add_at(x, std::ldexp(v, static_cast<int>(layer.level)));
        return out;
    }
};

/// The dyadic level of v > 0: the unique k with 2^k <= v < 2^(k+1).
inline std::int64_t dyadic_level(double v) {
    int e = 0;
    std::frexp(v, &e); // v = m * 2^e with m in [0.5, 1)
    return static_cast<std::int64_t>(e) - 1;
}

inline LayerDecomposition layer_decompose(const RealFn& f) {
    require_nonnegative(f, "layer_decompose");
    if (f.empty()) throw invalid_input("layer_decompose: zero function has no layers");

    std::map<std::int64_t, RealFn> profiles;
    for (const auto& [x, v] : f.values()) {
        const std::int64_t k = dyadic_level(v);
        auto it = profiles.find(k);
        if (it == profiles.end()) it = profiles.emplace(k, RealFn(f.group())).first;
        it->second.set(x, std::ldexp(v, static_cast<int>(-k)));
    }

    LayerDecomposition dec(f);
    for (auto& [k, prof] : profiles) {
        FiniteSubset pts = prof.support();
        dec.layers.emplace_back(k, std::move(pts), std::move(prof));
    }
    return dec;
}

/// Layer selection: the level whose crude norm proxy 2^k |E_k|^(1/p) is
/// largest, with ties resolved toward the smaller level.
struct KappaSelection {
    std::int64_t kappa = 0;
    double score = 0.0;
    double rho_hat = 0.0; // score / ||f||_p, always in (0, 2]
};

inline double layer_score(std::int64_t k, std::size_t count, double p) {
    return std::ldexp(1.0, static_cast<int>(k)) * std::pow(static_cast<double>(count), 1.0 / p);
}

inline KappaSelection kappa_select(const LayerDecomposition& dec, double p) {
    if (dec.layers.empty()) throw invalid_input("kappa_select: empty decomposition");
    if (!(p > 1.0) || std::isinf(p)) throw invalid_input("kappa_select: p must lie in (1,inf)");

    KappaSelection best;
    bool have = false;
    for (const auto& layer : dec.layers) {
        const double s = layer_score(layer.level, layer.points.size(), p);
        if (!have || s > best.score) {
            best.kappa = layer.level;
            best.score = s;
            have = true;
        }
    }
    best.rho_hat = best.score / dec.source_norm(p);
    return best;
}

enum class LorentzMethod { rearrangement, layer_proxy };

/// Discrete Lorentz quasinorm. Rearrangement form:
///   ( sum_n n^(r/p - 1) a_n^r )^(1/r)   with a_1 >= a_2 >= ... the sorted values.
/// Layer proxy form: ( sum_k (2^k |E_k|^(1/p))^r )^(1/r).
/// The two are comparable with constants depending only on (p, r).
inline double lorentz_norm(const RealFn& f, double p, double r, LorentzMethod method) {
    if (!(p > 1.0) || std::isinf(p)) throw invalid_input("lorentz_norm: p must lie in (1,inf)");
    if (!(r >= 1.0) || std::isinf(r)) throw invalid_input("lorentz_norm: r must lie in [1,inf)");
    require_nonnegative(f, "lorentz_norm");
    if (f.empty()) throw invalid_input("lorentz_norm: zero function");

    if (method == LorentzMethod::rearrangement) {
        std::vector<double> a;
        a.reserve(f.support_size());
        for (const auto& [x, v] : f.values()) a.push_back(v);
        std::sort(a.begin(), a.end(), std::greater<double>());
        double s = 0.0;
        for (std::size_t n = 1; n <= a.size(); ++n)
            s += std::pow(static_cast<double>(n), r / p - 1.0) * std::pow(a[n - 1], r);
        return std::pow(s, 1.0 / r);
    }

    const LayerDecomposition dec = layer_decompose(f);
    double s = 0.0;
    for (const auto& layer : dec.layers)
        s += std::pow(layer_score(layer.level, layer.points.size(), p), r);
    return std::pow(s, 1.0 / r);
}

/// Default interpolation exponent for the Lorentz-bound demonstration; a
/// heuristic choice, any r > p works.
inline double default_lorentz_r(double p) { return 2.0 * p; }

} // namespace yconv
