#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <type_traits>

#include "yconv/group.hpp"

namespace yconv {

inline constexpr double kInfExponent = std::numeric_limits<double>::infinity();

/// Finitely supported function on a group, stored as element -> value with
/// no explicit zeros. The map's key order is the canonical element order,
/// which makes iteration (and therefore serialization and summation order)
/// deterministic.
template <typename T>
class SparseFn {
  public:
    using value_type = T;
    using map_type = std::map<GroupElement, T>;

    explicit SparseFn(GroupDescriptor g) : group_(g) {}

    const GroupDescriptor& group() const { return group_; }
    const map_type& values() const { return values_; }
    std::size_t support_size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    /// Insert-or-overwrite; storing an exact zero erases the point.
    void set(const GroupElement& x, T v) {
        require_element(group_, x);
        if (v == T{}) values_.erase(x);
        else values_[x] = v;
    }

    /// Accumulate into a point (used by convolution kernels).
    void add_at(const GroupElement& x, T v) {
        require_element(group_, x);
        auto it = values_.find(x);
        if (it == values_.end()) {
            if (v != T{}) values_.emplace(x, v);
        } else {
            it->second += v;
            if (it->second == T{}) values_.erase(it);
        }
    }

    T at(const GroupElement& x) const {
        auto it = values_.find(x);
        return it == values_.end() ? T{} : it->second;
    }

    FiniteSubset support() const {
        std::vector<GroupElement> elems;
        elems.reserve(values_.size());
        for (const auto& [x, v] : values_) elems.push_back(x);
        return {group_, std::move(elems)};
    }

    friend bool operator==(const SparseFn&, const SparseFn&) = default;

  private:
    GroupDescriptor group_;
    map_type values_;
};

using RealFn = SparseFn<double>;
using CplxFn = SparseFn<std::complex<double>>;

inline RealFn indicator(const FiniteSubset& a) {
    RealFn f(a.group);
    for (const auto& x : a.elements) f.set(x, 1.0);
    return f;
}

inline RealFn delta(const GroupDescriptor& g, const GroupElement& z, double value = 1.0) {
    RealFn f(g);
    f.set(z, value);
    return f;
}

inline double abs_value(double v) { return std::abs(v); }
inline double abs_value(const std::complex<double>& v) { return std::abs(v); }

template <typename T>
bool is_nonnegative(const SparseFn<T>& f) {
    if constexpr (std::is_same_v<T, double>) {
        for (const auto& [x, v] : f.values())
            if (v < 0.0) return false;
        return true;
    } else {
        return false;
    }
}

template <typename T>
void require_nonnegative(const SparseFn<T>& f, const char* what) {
    if (!is_nonnegative(f)) throw invalid_input(std::string(what) + ": needs a nonnegative real function");
}

/// Counting-measure l^p norm; p = infinity gives the sup of |f|.
template <typename T>
double lp_norm(const SparseFn<T>& f, double p) {
    if (!(p >= 1.0)) throw invalid_input("lp_norm: exponent must satisfy p >= 1");
    if (f.empty()) return 0.0;
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& [x, v] : f.values()) m = std::max(m, abs_value(v));
        return m;
    }
    double s = 0.0;
    for (const auto& [x, v] : f.values()) s += std::pow(abs_value(v), p);
    return std::pow(s, 1.0 / p);
}

template <typename T>
SparseFn<T> scaled(const SparseFn<T>& f, T c) {
    SparseFn<T> out(f.group());
    for (const auto& [x, v] : f.values()) out.set(x, c * v);
    return out;
}

template <typename T>
SparseFn<T> add(const SparseFn<T>& f, const SparseFn<T>& g) {
    if (f.group() != g.group()) throw invalid_input("add: mixed group descriptors");
    SparseFn<T> out = f;
    for (const auto& [x, v] : g.values()) out.add_at(x, v);
    return out;
}

template <typename T>
SparseFn<T> sub(const SparseFn<T>& f, const SparseFn<T>& g) {
    if (f.group() != g.group()) throw invalid_input("sub: mixed group descriptors");
    SparseFn<T> out = f;
    for (const auto& [x, v] : g.values()) out.add_at(x, -v);
    return out;
}

/// Right translate: (translate(f,u))(x) = f(x + (-u)), i.e. support moves
/// from z to z+u. Preserves every l^p norm.
template <typename T>
SparseFn<T> translate(const SparseFn<T>& f, const GroupElement& u) {
    require_element(f.group(), u);
    SparseFn<T> out(f.group());
    for (const auto& [z, v] : f.values()) out.set(group_add(f.group(), z, u), v);
    return out;
}

/// x -> f(x)^a for nonnegative f and a > 0; support is unchanged.
inline RealFn pointwise_power(const RealFn& f, double a) {
    if (!(a > 0.0)) throw invalid_input("pointwise_power: exponent must be > 0");
    require_nonnegative(f, "pointwise_power");
    RealFn out(f.group());
    for (const auto& [x, v] : f.values()) out.set(x, std::pow(v, a));
    return out;
}

/// Keep only the points lying in `window`.
template <typename T>
SparseFn<T> restrict_to(const SparseFn<T>& f, const FiniteSubset& window) {
    if (f.group() != window.group) throw invalid_input("restrict_to: mixed group descriptors");
    SparseFn<T> out(f.group());
    for (const auto& [x, v] : f.values())
        if (window.contains(x)) out.set(x, v);
    return out;
}

/// Exponent triple (p1,p2,p3) with sum of reciprocals 2 and each p_j in (1,inf).
struct ExponentTriple {
    double p1, p2, p3;

    ExponentTriple(double a, double b, double c) : p1(a), p2(b), p3(c) {
        for (double p : {p1, p2, p3})
            if (!(p > 1.0) || std::isinf(p))
                throw invalid_input("ExponentTriple: each exponent must lie in (1,inf)");
        const double sum = 1.0 / p1 + 1.0 / p2 + 1.0 / p3;
        if (std::abs(sum - 2.0) > 2e-12)
            throw invalid_input("ExponentTriple: reciprocals must sum to 2");
    }

    double at(int j) const { return j == 0 ? p1 : (j == 1 ? p2 : p3); }
};

inline double conjugate_exponent(double p) {
    if (!(p > 1.0)) throw invalid_input("conjugate_exponent: p must be > 1");
    return p / (p - 1.0);
}

/// The p3 that completes (p1,p2,.) to a valid triple.
inline double third_exponent(double p1, double p2) {
    const double inv = 2.0 - 1.0 / p1 - 1.0 / p2;
    if (!(inv > 0.0) || !(inv < 1.0))
        throw invalid_input("third_exponent: (p1,p2) admits no conjugate third exponent");
    return 1.0 / inv;
}

} // namespace yconv
