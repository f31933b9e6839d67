#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "qpreth/common.hpp"

namespace qpreth {

/// A lattice site, given by its d integer coordinates.
using Site = std::vector<int>;

/// Finite d-dimensional box of sites with a nearest-neighbor (l1 distance 1)
/// adjacency convention. The standard constructor covers Z^d ∩ [-L,L]^d; an
/// explicit per-axis range supports chains of even length.
struct LatticeSpec {
    int d = 1;
    int q = 2;  // on-site Hilbert dimension
    std::vector<std::pair<int, int>> range;  // inclusive [lo, hi] per axis

    LatticeSpec() : range{{0, 0}} {}

    static LatticeSpec cube(int d, int L, int q = 2) {
        if (d < 1 || L < 0 || q < 2) throw config_error("LatticeSpec: need d >= 1, L >= 0, q >= 2");
        LatticeSpec s;
        s.d = d;
        s.q = q;
        s.range.assign(d, {-L, L});
        return s;
    }

    /// 1d chain with an explicit number of sites, centered near the origin.
    static LatticeSpec chain(int num_sites, int q = 2) {
        if (num_sites < 1) throw config_error("LatticeSpec: need at least one site");
        LatticeSpec s;
        s.d = 1;
        s.q = q;
        int lo = -(num_sites / 2);
        s.range = {{lo, lo + num_sites - 1}};
        return s;
    }

    long long volume() const {
        long long v = 1;
        for (auto& [lo, hi] : range) v *= (hi - lo + 1);
        return v;
    }

    bool contains(const Site& x) const {
        if (static_cast<int>(x.size()) != d) return false;
        for (int i = 0; i < d; ++i)
            if (x[i] < range[i].first || x[i] > range[i].second) return false;
        return true;
    }

    static bool adjacent(const Site& a, const Site& b) {
        long long dist = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            dist += std::abs(static_cast<long long>(a[i]) - b[i]);
        return dist == 1;
    }

    std::vector<Site> sites() const {
        std::vector<Site> out;
        Site cur(d);
        for (int i = 0; i < d; ++i) cur[i] = range[i].first;
        while (true) {
            out.push_back(cur);
            int axis = d - 1;
            while (axis >= 0) {
                if (++cur[axis] <= range[axis].second) break;
                cur[axis] = range[axis].first;
                --axis;
            }
            if (axis < 0) break;
        }
        return out;
    }

    bool compatible(const LatticeSpec& o) const { return d == o.d && q == o.q && range == o.range; }
};

/// Sorted, duplicate-free set of sites. Sorting is lexicographic; the first
/// site is the slowest tensor index everywhere in this library.
struct SupportSet {
    std::vector<Site> sites;

    SupportSet() = default;
    SupportSet(std::initializer_list<Site> s) : SupportSet(std::vector<Site>(s)) {}
    explicit SupportSet(std::vector<Site> s) : sites(std::move(s)) {
        std::sort(sites.begin(), sites.end());
        sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
        if (sites.empty()) throw config_error("SupportSet: empty support");
    }

    std::size_t size() const { return sites.size(); }

    bool contains(const Site& x) const {
        return std::binary_search(sites.begin(), sites.end(), x);
    }

    bool overlaps(const SupportSet& o) const {
        for (const auto& x : sites)
            if (o.contains(x)) return true;
        return false;
    }

    SupportSet unite(const SupportSet& o) const {
        std::vector<Site> u = sites;
        u.insert(u.end(), o.sites.begin(), o.sites.end());
        return SupportSet(std::move(u));
    }

    /// Connected in the nearest-neighbor graph (membership in P_c(Λ)).
    bool connected() const {
        if (sites.size() <= 1) return true;
        std::vector<bool> seen(sites.size(), false);
        std::queue<std::size_t> todo;
        todo.push(0);
        seen[0] = true;
        std::size_t count = 1;
        while (!todo.empty()) {
            std::size_t i = todo.front();
            todo.pop();
            for (std::size_t j = 0; j < sites.size(); ++j) {
                if (!seen[j] && LatticeSpec::adjacent(sites[i], sites[j])) {
                    seen[j] = true;
                    ++count;
                    todo.push(j);
                }
            }
        }
        return count == sites.size();
    }

    auto operator<=>(const SupportSet&) const = default;
};

/// 1d interval helper for chain-based tests and benchmarks.
inline SupportSet interval_support(int lo, int hi) {
    std::vector<Site> s;
    for (int x = lo; x <= hi; ++x) s.push_back({x});
    return SupportSet(std::move(s));
}

}  // namespace qpreth
