#pragma once

// Brute-force reference computations used only by the tests.  Everything here
// is deliberately naive and shares no code paths with the library beyond the
// basic Simplex/SimplicialComplex containers.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <vector>

#include "nabla/complex.hpp"

namespace oracle {

using nabla::Simplex;
using nabla::SimplicialComplex;

/// counts[k] = number of (k+1)-element chains of the relation, over all subsets.
inline std::vector<std::size_t> count_chains(std::size_t size, const std::function<bool(std::size_t, std::size_t)>& lt)
{
    if (size > 24) throw std::invalid_argument("count_chains: too many elements");
    std::vector<std::size_t> counts;
    for (std::uint32_t mask = 1; mask < (1u << size); ++mask) {
        bool chain = true;
        for (std::size_t i = 0; i < size && chain; ++i) {
            if (!(mask >> i & 1)) continue;
            for (std::size_t j = i + 1; j < size && chain; ++j) {
                if (mask >> j & 1) chain = lt(i, j) || lt(j, i);
            }
        }
        if (!chain) continue;
        const auto k = static_cast<std::size_t>(std::popcount(mask)) - 1;
        if (counts.size() <= k) counts.resize(k + 1, 0);
        ++counts[k];
    }
    return counts;
}

inline bool proper_subset(const Simplex& a, const Simplex& b)
{
    return a.size() < b.size() && std::includes(b.vertices().begin(), b.vertices().end(), a.vertices().begin(),
                                                a.vertices().end());
}

/// Chains of FP(K) by length: the simplex counts of K♭.
inline std::vector<std::size_t> barycentric_counts(const SimplicialComplex& k)
{
    const auto& s = k.simplexes();
    return count_chains(s.size(), [&](std::size_t i, std::size_t j) { return proper_subset(s[i], s[j]); });
}

/// Chains of FP(K) × [n]; with `strict_levels` only those whose levels are pairwise distinct.
inline std::vector<std::size_t> product_counts(const SimplicialComplex& k, int n, bool strict_levels)
{
    const auto& s = k.simplexes();
    const std::size_t levels = static_cast<std::size_t>(n) + 1;
    return count_chains(s.size() * levels, [&](std::size_t x, std::size_t y) {
        const std::size_t a = x / levels, b = y / levels, i = x % levels, j = y % levels;
        const bool face = a == b || proper_subset(s[a], s[b]);
        if (strict_levels) return face && i < j;
        return face && i <= j && x != y;
    });
}

/**
 * Number of cells of R(m, n) (weak) or Q(m, n) (strict) by dimension,
 * by dynamic programming over the position of each set's maximum.
 */
inline std::vector<std::size_t> cell_counts(int m, int n, bool strict)
{
    auto binom = [](int a, int b) -> std::size_t {
        if (b < 0 || a < 0 || b > a) return 0;
        std::size_t r = 1;
        for (int i = 1; i <= b; ++i) r = r * static_cast<std::size_t>(a - b + i) / static_cast<std::size_t>(i);
        return r;
    };
    const int max_total = (m + 1) * (n + 1);
    // ways[lo][total]: number of ways to choose the remaining sets with all elements >= lo
    std::function<std::vector<std::size_t>(int, int)> rec = [&](int sets_left, int lo) {
        std::vector<std::size_t> out(static_cast<std::size_t>(max_total) + 1, 0);
        if (sets_left == 0) {
            out[0] = 1;
            return out;
        }
        for (int top = lo; top <= n; ++top) {
            const auto rest = rec(sets_left - 1, strict ? top + 1 : top);
            for (int size = 1; size <= top - lo + 1; ++size) {
                const std::size_t ways = binom(top - lo, size - 1);
                for (int t = 0; t + size <= max_total; ++t) out[t + size] += ways * rest[t];
            }
        }
        return out;
    };
    const auto by_total = rec(m + 1, 0);
    std::vector<std::size_t> counts;
    for (int total = m + 1; total <= max_total; ++total) {
        const int dim = total - (m + 1);
        if (counts.size() <= static_cast<std::size_t>(dim)) counts.resize(dim + 1, 0);
        counts[dim] += by_total[total];
    }
    while (!counts.empty() && counts.back() == 0) counts.pop_back();
    return counts;
}

/// Betti numbers over the two-element field, by dense elimination.
inline std::vector<std::size_t> betti_mod2(const SimplicialComplex& k)
{
    const int top = k.dim();
    std::vector<std::size_t> rank(top + 2, 0);  // rank[d] = rank of boundary C_d -> C_{d-1}
    for (int d = 1; d <= top; ++d) {
        const auto [lo0, lo1] = k.range(d - 1);
        const auto [hi0, hi1] = k.range(d);
        const std::size_t rows = lo1 - lo0;
        std::vector<std::vector<char>> m;
        for (std::size_t j = hi0; j < hi1; ++j) {
            std::vector<char> col(rows, 0);
            const Simplex& s = k.simplex(j);
            for (std::size_t i = 0; i < s.size(); ++i) col[*k.index_of(s.facet(i)) - lo0] = 1;
            m.push_back(std::move(col));
        }
        std::size_t r = 0;
        for (std::size_t row = 0; row < rows && r < m.size(); ++row) {
            std::size_t piv = r;
            while (piv < m.size() && !m[piv][row]) ++piv;
            if (piv == m.size()) continue;
            std::swap(m[piv], m[r]);
            for (std::size_t c = 0; c < m.size(); ++c) {
                if (c != r && m[c][row]) {
                    for (std::size_t x = 0; x < rows; ++x) m[c][x] ^= m[r][x];
                }
            }
            ++r;
        }
        rank[d] = r;
    }
    std::vector<std::size_t> betti;
    for (int d = 0; d <= top; ++d) betti.push_back(k.count(d) - rank[d] - rank[d + 1]);
    return betti;
}

/**
 * Replays (free face, cofacet) pairs on a set of simplexes by scanning the
 * whole alive set at every step.  Returns the index of the first invalid
 * step, or -1, and leaves the survivors in `alive`.
 */
inline long naive_replay(std::set<Simplex>& alive, const std::vector<std::pair<Simplex, Simplex>>& steps)
{
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto& [f, c] = steps[i];
        if (!alive.count(f) || !alive.count(c)) return static_cast<long>(i);
        if (f.size() + 1 != c.size() || !proper_subset(f, c)) return static_cast<long>(i);
        for (const Simplex& s : alive) {
            if (proper_subset(c, s)) return static_cast<long>(i);
            if (s != c && proper_subset(f, s)) return static_cast<long>(i);
        }
        alive.erase(f);
        alive.erase(c);
    }
    return -1;
}

}  // namespace oracle
