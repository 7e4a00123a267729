#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "complex.hpp"
#include "grayson.hpp"
#include "poset.hpp"
#include "smith.hpp"

namespace nabla {

/// ∂_k: C_k → C_{k-1}; column j is the boundary of the j-th k-simplex.
struct ChainBoundary
{
    int dimension = 0;
    std::size_t rows = 0;  // number of (k-1)-simplexes
    std::size_t cols = 0;  // number of k-simplexes
    std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> columns;

    std::vector<std::vector<std::int64_t>> dense() const
    {
        std::vector<std::vector<std::int64_t>> d(rows, std::vector<std::int64_t>(cols, 0));
        for (std::size_t j = 0; j < cols; ++j) {
            for (auto [i, v] : columns[j]) d[i][j] = v;
        }
        return d;
    }
};

/// Boundaries ∂_1 .. ∂_dim with the orientation induced by the vertex order.
inline std::vector<ChainBoundary> boundary_matrices(const SimplicialComplex& k)
{
    std::vector<ChainBoundary> out;
    for (int d = 1; d <= k.dim(); ++d) {
        ChainBoundary b;
        b.dimension = d;
        const auto [lo_first, lo_last] = k.range(d - 1);
        const auto [first, last] = k.range(d);
        b.rows = lo_last - lo_first;
        b.cols = last - first;
        b.columns.resize(b.cols);
        for (std::size_t j = first; j < last; ++j) {
            const Simplex& s = k.simplex(j);
            auto& col = b.columns[j - first];
            for (std::size_t i = 0; i < s.size(); ++i) {
                const auto row = static_cast<std::uint32_t>(*k.index_of(s.facet(i)) - lo_first);
                col.emplace_back(row, (i % 2 == 0) ? 1 : -1);
            }
            std::sort(col.begin(), col.end());
        }
        out.push_back(std::move(b));
    }
    return out;
}

/// Checks ∂_{k-1} ∘ ∂_k = 0 for consecutive boundaries.
inline bool boundary_squares_to_zero(const std::vector<ChainBoundary>& bs)
{
    for (std::size_t t = 1; t < bs.size(); ++t) {
        const auto& lower = bs[t - 1];
        const auto& upper = bs[t];
        for (const auto& col : upper.columns) {
            std::map<std::uint32_t, std::int64_t> acc;
            for (auto [i, v] : col) {
                for (auto [r, w] : lower.columns[i]) acc[r] += v * w;
            }
            for (auto& [r, x] : acc) {
                if (x != 0) return false;
            }
        }
    }
    return true;
}

struct DimHomology
{
    std::size_t betti = 0;
    std::vector<std::string> torsion;  // invariant factors > 1, ascending

    friend bool operator==(const DimHomology&, const DimHomology&) = default;
};

/// H_0 .. H_dim over the integers.
struct HomologyProfile
{
    std::vector<DimHomology> groups;

    std::vector<std::size_t> betti() const
    {
        std::vector<std::size_t> b;
        for (const auto& g : groups) b.push_back(g.betti);
        return b;
    }

    long long euler_from_betti() const
    {
        long long chi = 0;
        for (std::size_t k = 0; k < groups.size(); ++k) {
            chi += (k % 2 == 0 ? 1 : -1) * static_cast<long long>(groups[k].betti);
        }
        return chi;
    }

    bool is_point() const
    {
        if (groups.empty() || groups[0].betti != 1 || !groups[0].torsion.empty()) return false;
        for (std::size_t k = 1; k < groups.size(); ++k) {
            if (groups[k].betti != 0 || !groups[k].torsion.empty()) return false;
        }
        return true;
    }

    /// Equality up to trailing trivial groups.
    friend bool operator==(const HomologyProfile& a, const HomologyProfile& b)
    {
        auto trimmed = [](std::vector<DimHomology> g) {
            while (!g.empty() && g.back().betti == 0 && g.back().torsion.empty()) g.pop_back();
            return g;
        };
        return trimmed(a.groups) == trimmed(b.groups);
    }

    /// One line per dimension: "H_k: betti=<b> torsion=<t1,t2,...>".
    std::string to_string() const
    {
        std::string out;
        for (std::size_t k = 0; k < groups.size(); ++k) {
            out += "H_" + std::to_string(k) + ": betti=" + std::to_string(groups[k].betti) + " torsion=";
            for (std::size_t i = 0; i < groups[k].torsion.size(); ++i) {
                if (i) out += ',';
                out += groups[k].torsion[i];
            }
            out += '\n';
        }
        return out;
    }
};

inline HomologyProfile homology(const SimplicialComplex& k, Budget& budget = unlimited_budget())
{
    HomologyProfile prof;
    const int top = k.dim();
    if (top < 0) return prof;
    budget.charge(k.size());
    const auto bs = boundary_matrices(k);
    std::vector<SmithSummary> red;  // red[d-1] for ∂_d
    for (const auto& b : bs) red.push_back(smith_summary(b.rows, b.columns));
    for (int d = 0; d <= top; ++d) {
        const std::size_t rank_out = d >= 1 ? red[d - 1].rank : 0;
        const std::size_t rank_in = d + 1 <= top ? red[d].rank : 0;
        DimHomology g;
        g.betti = k.count(d) - rank_out - rank_in;
        if (d + 1 <= top) g.torsion = red[d].torsion;
        prof.groups.push_back(std::move(g));
    }
    return prof;
}

/// Face poset of a cell complex (cells in canonical order, ≤ = face relation).
inline Poset cell_face_poset(const CellComplex& cx)
{
    std::vector<std::string> labels;
    std::vector<std::vector<std::size_t>> above(cx.cells.size());
    for (std::size_t i = 0; i < cx.cells.size(); ++i) {
        labels.push_back(cx.cells[i].to_string());
        for (const Cell& f : cell_faces(cx.cells[i])) above[cx.index.at(f)].push_back(i);
    }
    return Poset(std::move(labels), std::move(above));
}

/// Homology of a cell complex through the order complex of its face poset.
inline HomologyProfile cell_homology(const CellComplex& cx, Budget& budget = unlimited_budget())
{
    return homology(order_complex(cell_face_poset(cx), budget), budget);
}

inline HomologyProfile cell_homology_Q(int m, int n, Budget& budget = unlimited_budget())
{
    return cell_homology(enumerate_cells(m, n, Flavor::Q, budget), budget);
}

}  // namespace nabla
