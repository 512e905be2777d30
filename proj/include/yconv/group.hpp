#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "yconv/errors.hpp"

namespace yconv {

/// Default cap on |A|*|B| pair enumeration in sumsets and convolutions.
inline constexpr std::size_t kDefaultPairLimit = 1'000'000;

enum class Family { lattice, free_group, cyclic };

/// Which discrete group we are working in.
///
/// Three families are supported: the lattice Z^d, the free group F_k on k
/// generators, and the cyclic group Z_n. The group operation is written
/// additively throughout, also for F_k.
struct GroupDescriptor {
    Family family = Family::lattice;
    std::int64_t param = 1; // d, k, or n

    static GroupDescriptor lattice(std::int64_t d) {
        if (d < 1) throw invalid_input("lattice dimension must be >= 1");
        return {Family::lattice, d};
    }
    static GroupDescriptor free_group(std::int64_t k) {
        if (k < 1) throw invalid_input("free group needs >= 1 generators");
        return {Family::free_group, k};
    }
    static GroupDescriptor cyclic(std::int64_t n) {
        if (n < 2) throw invalid_input("cyclic order must be >= 2");
        return {Family::cyclic, n};
    }

    /// True for Z^d and F_k; Z_n always has itself as a finite subgroup.
    bool is_torsion_free() const { return family != Family::cyclic; }

    friend bool operator==(const GroupDescriptor&, const GroupDescriptor&) = default;
};

/// Canonical element encoding, one flat integer sequence per family:
///  - lattice:   d coordinates
///  - free group: reduced word of signed generator indices (+i / -i, 1-based),
///    first letter first; no adjacent cancelling pair
///  - cyclic:    single residue in [0, n)
/// std::vector's lexicographic order doubles as the element total order.
using GroupElement = std::vector<std::int64_t>;

inline GroupElement identity(const GroupDescriptor& g) {
    switch (g.family) {
        case Family::lattice: return GroupElement(static_cast<std::size_t>(g.param), 0);
        case Family::free_group: return {};
        case Family::cyclic: return {0};
    }
    return {};
}

inline bool is_valid_element(const GroupDescriptor& g, const GroupElement& x) {
    switch (g.family) {
        case Family::lattice:
            return x.size() == static_cast<std::size_t>(g.param);
        case Family::free_group:
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (x[i] == 0 || std::abs(x[i]) > g.param) return false;
                if (i + 1 < x.size() && x[i] == -x[i + 1]) return false;
            }
            return true;
        case Family::cyclic:
            return x.size() == 1 && x[0] >= 0 && x[0] < g.param;
    }
    return false;
}

inline void require_element(const GroupDescriptor& g, const GroupElement& x) {
    if (!is_valid_element(g, x))
        throw invalid_input("element is not in canonical form for this group");
}

/// Fully reduce a free-group letter sequence (stack cancellation).
inline GroupElement reduce_word(const GroupElement& letters) {
    GroupElement out;
    out.reserve(letters.size());
    for (std::int64_t s : letters) {
        if (!out.empty() && out.back() == -s) out.pop_back();
        else out.push_back(s);
    }
    return out;
}

inline std::int64_t mod_residue(std::int64_t a, std::int64_t n) {
    std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

/// Group product a+b in canonical form.
inline GroupElement group_add(const GroupDescriptor& g, const GroupElement& a,
                              const GroupElement& b) {
    require_element(g, a);
    require_element(g, b);
    switch (g.family) {
        case Family::lattice: {
            GroupElement out(a);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
            return out;
        }
        case Family::free_group: {
            // Both inputs are reduced, so only boundary letters can cancel.
            GroupElement out(a);
            for (std::int64_t s : b) {
                if (!out.empty() && out.back() == -s) out.pop_back();
                else out.push_back(s);
            }
            return out;
        }
        case Family::cyclic:
            return {mod_residue(a[0] + b[0], g.param)};
    }
    return {};
}

/// Group inverse; group_add(a, group_neg(a)) is the identity.
inline GroupElement group_neg(const GroupDescriptor& g, const GroupElement& a) {
    require_element(g, a);
    switch (g.family) {
        case Family::lattice: {
            GroupElement out(a);
            for (auto& c : out) c = -c;
            return out;
        }
        case Family::free_group: {
            GroupElement out(a.rbegin(), a.rend());
            for (auto& s : out) s = -s;
            return out;
        }
        case Family::cyclic:
            return {mod_residue(-a[0], g.param)};
    }
    return {};
}

/// An ordered duplicate-free set of elements of one group.
struct FiniteSubset {
    GroupDescriptor group;
    std::vector<GroupElement> elements; // sorted, unique

    std::size_t size() const { return elements.size(); }
    bool empty() const { return elements.empty(); }
    bool contains(const GroupElement& x) const {
        return std::binary_search(elements.begin(), elements.end(), x);
    }
};

/// Build a subset from an arbitrary element list (validates, sorts, dedups).
inline FiniteSubset make_subset(const GroupDescriptor& g, std::vector<GroupElement> elems) {
    for (const auto& x : elems) require_element(g, x);
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    return {g, std::move(elems)};
}

/// The box [-radius, radius]^d in Z^d, enumerated in canonical order.
inline FiniteSubset lattice_box(std::int64_t d, std::int64_t radius) {
    auto g = GroupDescriptor::lattice(d);
    if (radius < 0) throw invalid_input("box radius must be >= 0");
    std::vector<GroupElement> elems;
    GroupElement cur(static_cast<std::size_t>(d), -radius);
    const std::int64_t side = 2 * radius + 1;
    std::size_t total = 1;
    for (std::int64_t i = 0; i < d; ++i) total *= static_cast<std::size_t>(side);
    elems.reserve(total);
    for (;;) {
        elems.push_back(cur);
        std::int64_t axis = d - 1;
        while (axis >= 0) {
            if (++cur[static_cast<std::size_t>(axis)] <= radius) break;
            cur[static_cast<std::size_t>(axis)] = -radius;
            --axis;
        }
        if (axis < 0) break;
    }
    std::sort(elems.begin(), elems.end());
    return {g, std::move(elems)};
}

/// All reduced words of length <= radius in F_k.
inline FiniteSubset free_ball(std::int64_t k, std::int64_t radius) {
    auto g = GroupDescriptor::free_group(k);
    if (radius < 0) throw invalid_input("ball radius must be >= 0");
    std::vector<GroupElement> elems{identity(g)};
    std::vector<GroupElement> frontier{identity(g)};
    for (std::int64_t len = 1; len <= radius; ++len) {
        std::vector<GroupElement> next;
        for (const auto& w : frontier) {
            for (std::int64_t i = 1; i <= k; ++i) {
                for (std::int64_t s : {i, -i}) {
                    if (!w.empty() && w.back() == -s) continue;
                    GroupElement ext(w);
                    ext.push_back(s);
                    next.push_back(std::move(ext));
                }
            }
        }
        elems.insert(elems.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    std::sort(elems.begin(), elems.end());
    return {g, std::move(elems)};
}

/// The whole of Z_n.
inline FiniteSubset cyclic_all(std::int64_t n) {
    auto g = GroupDescriptor::cyclic(n);
    std::vector<GroupElement> elems;
    elems.reserve(static_cast<std::size_t>(n));
    for (std::int64_t r = 0; r < n; ++r) elems.push_back({r});
    return {g, std::move(elems)};
}

/// A+B = {a+b}, deduplicated, canonical order.
inline FiniteSubset sumset(const FiniteSubset& a, const FiniteSubset& b,
                           std::size_t pair_limit = kDefaultPairLimit) {
    if (a.group != b.group) throw invalid_input("sumset: mixed group descriptors");
    if (a.empty() || b.empty()) throw invalid_input("sumset: empty operand");
    if (a.size() > pair_limit / b.size())
        throw resource_limit("sumset: |A|*|B| exceeds pair limit " + std::to_string(pair_limit));
    std::vector<GroupElement> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a.elements)
        for (const auto& y : b.elements) out.push_back(group_add(a.group, x, y));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return {a.group, std::move(out)};
}

/// nT = {t_1 + ... + t_n : t_j in T}. For torsion-free groups |nT| >= n|T|-n+1.
inline FiniteSubset nfold_sumset(const FiniteSubset& t, std::int64_t n,
                                 std::size_t pair_limit = kDefaultPairLimit) {
    if (n < 1) throw invalid_input("nfold_sumset: n must be >= 1");
    if (t.empty()) throw invalid_input("nfold_sumset: empty set");
    FiniteSubset acc = t;
    for (std::int64_t i = 1; i < n; ++i) acc = sumset(acc, t, pair_limit);
    return acc;
}

/// |A+B| - (|A|+|B|-1); nonnegative whenever the group is torsion-free.
inline std::int64_t kemperman_margin(const FiniteSubset& a, const FiniteSubset& b,
                                     std::size_t pair_limit = kDefaultPairLimit) {
    const auto s = sumset(a, b, pair_limit);
    return static_cast<std::int64_t>(s.size()) -
           (static_cast<std::int64_t>(a.size()) + static_cast<std::int64_t>(b.size()) - 1);
}

} // namespace yconv
