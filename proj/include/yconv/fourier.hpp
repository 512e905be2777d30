#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "yconv/young.hpp"

namespace yconv {

/// Uniform-grid quadrature state for torus norms of transforms. points_per_axis
/// and achieved_relative_change are filled in by hy_norm; the rest are inputs.
/// The torus carries probability measure, so the norm of a constant is its value.
struct TorusQuadrature {
    std::int64_t oversampling = 8;           // grid points per unit of support bandwidth
    double rel_tol = 1e-7;                   // stop when doubling moves the estimate less than this
    std::int64_t max_points_per_axis = 1 << 20;
    int dimension = 0;                       // set by hy_norm
    std::int64_t points_per_axis = 0;        // set by hy_norm
    double achieved_relative_change = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

template <typename T>
void require_lattice(const SparseFn<T>& f, const char* what) {
    if (f.group().family != Family::lattice)
        throw invalid_input(std::string(what) + ": transform defined for lattice groups only");
}

// Phase drift from the multiplicative recurrence stays below ~1e-12 between
// direct re-evaluations at this stride.
inline constexpr std::int64_t kPhaseResyncStride = 4096;

} // namespace detail

/// Transform value at a frequency point xi in [0,1)^d:
///   sum over x of f(x) e^(-2 pi i xi . x).
template <typename T>
std::complex<double> dft_eval(const SparseFn<T>& f, const std::vector<double>& xi) {
    detail::require_lattice(f, "dft_eval");
    if (static_cast<std::int64_t>(xi.size()) != f.group().param)
        throw invalid_input("dft_eval: frequency dimension mismatch");
    std::complex<double> acc = 0.0;
    for (const auto& [x, v] : f.values()) {
        double phase = 0.0;
        for (std::size_t i = 0; i < xi.size(); ++i) phase += xi[i] * static_cast<double>(x[i]);
        acc += std::complex<double>(v) * std::polar(1.0, -2.0 * std::numbers::pi * phase);
    }
    return acc;
}

namespace detail {

/// Mean of |f^|^q over the K^d uniform grid, raised to 1/q. Evaluated per
/// support point with a multiplicative phase recurrence along the last axis;
/// the recurrence is re-anchored periodically and all anchor phases are
/// reduced mod K to keep the trig arguments small.
template <typename T>
double grid_norm_estimate(const SparseFn<T>& f, double q, std::int64_t K) {
    const int d = static_cast<int>(f.group().param);
    std::int64_t rows = 1;
    for (int i = 0; i + 1 < d; ++i) rows *= K;
    const std::int64_t grid_size = rows * K;

    std::vector<std::complex<double>> acc(static_cast<std::size_t>(grid_size), 0.0);
    const double step = -2.0 * std::numbers::pi / static_cast<double>(K);
    const double Kd = static_cast<double>(K);

    for (const auto& [x, v] : f.values()) {
        const std::complex<double> cv(v);
        const double xd = static_cast<double>(x[d - 1]);
        const std::complex<double> ratio = std::polar(1.0, step * xd);
        for (std::int64_t row = 0; row < rows; ++row) {
            // row encodes the leading d-1 frequency indices, last one fastest
            double outer = 0.0;
            std::int64_t rem = row;
            for (int i = d - 2; i >= 0; --i) {
                outer += static_cast<double>(rem % K) * static_cast<double>(x[i]);
                rem /= K;
            }
            const std::size_t base_idx = static_cast<std::size_t>(row * K);
            std::complex<double> cur = std::polar(1.0, step * std::fmod(outer, Kd));
            for (std::int64_t jl = 0; jl < K; ++jl) {
                if (jl != 0 && jl % kPhaseResyncStride == 0)
                    cur = std::polar(1.0, step * std::fmod(outer + static_cast<double>(jl) * xd, Kd));
                acc[base_idx + static_cast<std::size_t>(jl)] += cv * cur;
                cur *= ratio;
            }
        }
    }

    double sum = 0.0;
    for (const auto& z : acc) sum += std::pow(std::abs(z), q);
    return std::pow(sum / static_cast<double>(grid_size), 1.0 / q);
}

} // namespace detail

/// Quadrature estimate of the torus L^q norm of the transform of f, refined by
/// doubling the grid until the estimate moves by less than quad.rel_tol.
/// Throws a resource error carrying the last two estimates if the cap is hit.
template <typename T>
double hy_norm(const SparseFn<T>& f, double q, TorusQuadrature& quad) {
    detail::require_lattice(f, "hy_norm");
    if (!(q >= 1.0) || std::isinf(q)) throw invalid_input("hy_norm: q must lie in [1,inf)");
    if (f.empty()) return 0.0;
    const int d = static_cast<int>(f.group().param);
    if (d > 3) throw invalid_input("hy_norm: dense grids support dimension <= 3");

    std::int64_t width = 0;
    for (int i = 0; i < d; ++i) {
        std::int64_t lo = 0, hi = 0;
        bool first = true;
        for (const auto& [x, v] : f.values()) {
            lo = first ? x[i] : std::min(lo, x[i]);
            hi = first ? x[i] : std::max(hi, x[i]);
            first = false;
        }
        width = std::max(width, hi - lo);
    }

    std::int64_t K = 8;
    while (K < quad.oversampling * (width + 1)) K *= 2;

    quad.dimension = d;
    double prev = detail::grid_norm_estimate(f, q, K);
    while (true) {
        if (2 * K > quad.max_points_per_axis)
            throw resource_limit("hy_norm: grid cap " + std::to_string(quad.max_points_per_axis) +
                                 " reached before convergence; last estimates " +
                                 std::to_string(prev) + " (K=" + std::to_string(K) + ") and coarser");
        K *= 2;
        const double cur = detail::grid_norm_estimate(f, q, K);
        const double change = std::abs(cur - prev) / std::max(std::abs(cur), 1e-300);
        if (change < quad.rel_tol) {
            quad.points_per_axis = K;
            quad.achieved_relative_change = change;
            return cur;
        }
        prev = cur;
    }
}

template <typename T>
double hy_norm(const SparseFn<T>& f, double q) {
    TorusQuadrature quad;
    return hy_norm(f, q, quad);
}

/// Transform-side ratio ||f^||_{p'} / ||f||_p together with the concentration
/// parameter t = ||f||_inf / ||f||_p. The ratio never exceeds 1 beyond
/// quadrature error, with equality approached by single point masses.
struct HyRatio {
    double ratio = 0.0;
    double t = 0.0;
};

template <typename T>
HyRatio hy_ratio(const SparseFn<T>& f, double p, TorusQuadrature& quad) {
    if (!(p > 1.0) || p > 2.0) throw invalid_input("hy_ratio: p must lie in (1,2]");
    if (f.empty()) throw invalid_input("hy_ratio: zero function");
    const double np = lp_norm(f, p);
    HyRatio out;
    out.ratio = hy_norm(f, conjugate_exponent(p), quad) / np;
    out.t = lp_norm(f, kInfExponent) / np;
    return out;
}

template <typename T>
HyRatio hy_ratio(const SparseFn<T>& f, double p) {
    TorusQuadrature quad;
    return hy_ratio(f, p, quad);
}

/// Both gaps of the squaring chain at p <= 4/3, with s = (2/p - 1)^(-1):
///   gap1 = ||f*f||_s - ||f^||_{p'}^2   (transform of f*f is (f^)^2)
///   gap2 = ||f||_p^2 - ||f*f||_s
/// Each is nonnegative up to quadrature error; gap2 involves no quadrature.
struct ChainGaps {
    double gap1 = 0.0;
    double gap2 = 0.0;
    double s = 0.0;
};

inline ChainGaps hy_chain_gaps(const RealFn& f, double p, TorusQuadrature& quad,
                               std::size_t pair_limit = kDefaultPairLimit) {
    if (!(p > 1.0) || p > 4.0 / 3.0 + 1e-15)
        throw invalid_input("hy_chain_gaps: chain requires p in (1, 4/3]");
    require_nonnegative(f, "hy_chain_gaps");
    if (f.empty()) throw invalid_input("hy_chain_gaps: zero function");

    ChainGaps out;
    out.s = 1.0 / (2.0 / p - 1.0);
    const double conv_norm = lp_norm(convolve(f, f, pair_limit), out.s);
    const double hy = hy_norm(f, conjugate_exponent(p), quad);
    out.gap1 = conv_norm - hy * hy;
    out.gap2 = std::pow(lp_norm(f, p), 2.0) - conv_norm;
    return out;
}

inline ChainGaps hy_chain_gaps(const RealFn& f, double p, std::size_t pair_limit = kDefaultPairLimit) {
    TorusQuadrature quad;
    return hy_chain_gaps(f, p, quad, pair_limit);
}

/// Interpolation weight for p in (4/3, 2): theta = 3 - 4/p, the solution of
/// 1/p = theta/2 + 3(1-theta)/4.
inline double theta_exponent(double p) {
    if (!(p > 4.0 / 3.0) || !(p < 2.0))
        throw invalid_input("theta_exponent: p must lie in (4/3, 2)");
    return 3.0 - 4.0 / p;
}

/// Composes an empirical endpoint curve through the interpolation bookkeeping:
/// the curve at exponent p evaluates as (curve(t^(3p-4)))^theta.
template <typename Curve>
auto composed_curve(Curve curve, double p) {
    const double theta = theta_exponent(p);
    const double inner_power = 3.0 * p - 4.0;
    return [curve, theta, inner_power](double t) {
        return std::pow(curve(std::pow(t, inner_power)), theta);
    };
}

/// Pointwise modulation f(x) e^(2 pi i xi0 . x); preserves every transform
/// modulus up to a frequency shift, hence every hy quantity.
template <typename T>
CplxFn modulate(const SparseFn<T>& f, const std::vector<double>& xi0) {
    detail::require_lattice(f, "modulate");
    if (static_cast<std::int64_t>(xi0.size()) != f.group().param)
        throw invalid_input("modulate: frequency dimension mismatch");
    CplxFn out(f.group());
    for (const auto& [x, v] : f.values()) {
        double phase = 0.0;
        for (std::size_t i = 0; i < xi0.size(); ++i) phase += xi0[i] * static_cast<double>(x[i]);
        out.set(x, std::complex<double>(v) * std::polar(1.0, 2.0 * std::numbers::pi * phase));
    }
    return out;
}

} // namespace yconv
