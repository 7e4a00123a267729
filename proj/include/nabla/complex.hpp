#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "errors.hpp"
#include "simplex.hpp"

namespace nabla {

/**
 * A finite abstract simplicial complex stored as its full, downward-closed
 * simplex set.
 *
 * Simplexes are kept in canonical order (dimension, then lexicographic), so
 * `index_of` doubles as the deterministic numbering used for the vertices of
 * the barycentric subdivision.  The empty complex has dim() == -1.
 */
class SimplicialComplex
{
public:
    SimplicialComplex() = default;

    /// Downward closure of arbitrary generators.
    static SimplicialComplex closure_of(const std::vector<Simplex>& generators,
                                        Budget& budget = unlimited_budget())
    {
        std::unordered_set<Simplex, SimplexHash> all;
        for (const Simplex& g : generators) {
            if (g.size() > 63) throw parameter_error("simplex dimension too large");
            g.for_each_face([&](Simplex face) {
                if (all.insert(std::move(face)).second) budget.charge();
            });
        }
        std::vector<Simplex> sorted(all.begin(), all.end());
        return SimplicialComplex(std::move(sorted));
    }

    /// Builds from a set that the caller already knows to be downward closed.
    static SimplicialComplex from_closed(std::vector<Simplex> simplexes)
    {
        return SimplicialComplex(std::move(simplexes));
    }

    std::size_t size() const { return m_simplexes.size(); }
    bool empty() const { return m_simplexes.empty(); }
    int dim() const { return m_simplexes.empty() ? -1 : static_cast<int>(m_dim_offsets.size()) - 2; }

    const std::vector<Simplex>& simplexes() const { return m_simplexes; }
    const Simplex& simplex(std::size_t i) const { return m_simplexes[i]; }
    const std::vector<VertexId>& vertices() const { return m_vertices; }
    std::size_t vertex_count() const { return m_vertices.size(); }

    /// Number of simplexes of dimension k.
    std::size_t count(int k) const
    {
        if (k < 0 || k > dim()) return 0;
        return m_dim_offsets[k + 1] - m_dim_offsets[k];
    }

    /// Index range [first, last) of the k-simplexes in canonical order.
    std::pair<std::size_t, std::size_t> range(int k) const
    {
        if (k < 0 || k > dim()) return {0, 0};
        return {m_dim_offsets[k], m_dim_offsets[k + 1]};
    }

    std::optional<std::size_t> index_of(const Simplex& s) const
    {
        auto it = m_index.find(s);
        if (it == m_index.end()) return std::nullopt;
        return it->second;
    }

    bool contains(const Simplex& s) const { return m_index.count(s) != 0; }

    bool has_vertex(VertexId v) const
    {
        return std::binary_search(m_vertices.begin(), m_vertices.end(), v);
    }

    /// Simplexes not a proper face of any other simplex, in canonical order.
    std::vector<Simplex> maximal_simplexes() const
    {
        std::vector<char> covered(m_simplexes.size(), 0);
        for (const Simplex& s : m_simplexes) {
            if (s.size() < 2) continue;
            for (std::size_t i = 0; i < s.size(); ++i) {
                covered[m_index.at(s.facet(i))] = 1;
            }
        }
        std::vector<Simplex> out;
        for (std::size_t i = 0; i < m_simplexes.size(); ++i) {
            if (!covered[i]) out.push_back(m_simplexes[i]);
        }
        return out;
    }

    bool is_subcomplex_of(const SimplicialComplex& other) const
    {
        return std::all_of(m_simplexes.begin(), m_simplexes.end(),
                           [&](const Simplex& s) { return other.contains(s); });
    }

    long long euler_characteristic() const
    {
        long long chi = 0;
        for (int k = 0; k <= dim(); ++k) {
            chi += (k % 2 == 0 ? 1 : -1) * static_cast<long long>(count(k));
        }
        return chi;
    }

    friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b)
    {
        return a.m_simplexes == b.m_simplexes;
    }

private:
    explicit SimplicialComplex(std::vector<Simplex> simplexes)
        : m_simplexes(std::move(simplexes))
    {
        std::sort(m_simplexes.begin(), m_simplexes.end());
        m_simplexes.erase(std::unique(m_simplexes.begin(), m_simplexes.end()),
                          m_simplexes.end());
        m_index.reserve(m_simplexes.size());
        int top = -1;
        for (std::size_t i = 0; i < m_simplexes.size(); ++i) {
            const Simplex& s = m_simplexes[i];
            m_index.emplace(s, i);
            while (top < s.dim()) {
                ++top;
                m_dim_offsets.push_back(i);
            }
            if (s.dim() == 0) m_vertices.push_back(s[0]);
        }
        if (!m_simplexes.empty()) m_dim_offsets.push_back(m_simplexes.size());
    }

    std::vector<Simplex> m_simplexes;
    std::unordered_map<Simplex, std::size_t, SimplexHash> m_index;
    std::vector<VertexId> m_vertices;
    // m_dim_offsets[k] = first index of dimension k; last entry = size()
    std::vector<std::size_t> m_dim_offsets;
};

using ComplexPtr = std::shared_ptr<const SimplicialComplex>;

inline ComplexPtr share(SimplicialComplex k)
{
    return std::make_shared<const SimplicialComplex>(std::move(k));
}

/// Downward closure of the generators; rejects unsorted or repeated vertices.
inline SimplicialComplex make_complex(const std::vector<std::vector<VertexId>>& generators)
{
    std::vector<Simplex> gens;
    gens.reserve(generators.size());
    for (const auto& g : generators) gens.emplace_back(g);
    return SimplicialComplex::closure_of(gens);
}

inline SimplicialComplex skeleton(const SimplicialComplex& k, int n)
{
    if (n < -1) throw parameter_error("skeleton dimension must be >= -1");
    std::vector<Simplex> kept;
    for (const Simplex& s : k.simplexes()) {
        if (s.dim() <= n) kept.push_back(s);
    }
    return SimplicialComplex::from_closed(std::move(kept));
}

/// The subcomplex of simplexes all of whose vertices satisfy `keep`.
template <typename Pred>
SimplicialComplex full_subcomplex(const SimplicialComplex& k, Pred keep)
{
    std::vector<Simplex> kept;
    for (const Simplex& s : k.simplexes()) {
        if (std::all_of(s.vertices().begin(), s.vertices().end(), keep)) kept.push_back(s);
    }
    return SimplicialComplex::from_closed(std::move(kept));
}

/// The standard n-simplex on vertices 0..n with all faces.
inline SimplicialComplex full_simplex(int n)
{
    std::vector<VertexId> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = static_cast<VertexId>(i);
    return SimplicialComplex::closure_of({Simplex(v)});
}

/// Boundary of the (n+1)-simplex on vertices first..first+n+1: a simplicial n-sphere.
inline SimplicialComplex sphere_boundary(int n, VertexId first = 0)
{
    std::vector<Simplex> facets;
    for (int skip = 0; skip <= n + 1; ++skip) {
        std::vector<VertexId> v;
        for (int i = 0; i <= n + 1; ++i) {
            if (i != skip) v.push_back(first + static_cast<VertexId>(i));
        }
        facets.emplace_back(std::move(v));
    }
    return SimplicialComplex::closure_of(facets);
}

}  // namespace nabla
