#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "complex.hpp"
#include "simplicial_map.hpp"

namespace nabla {

/**
 * A finite poset on elements 0..size()-1.
 *
 * The relation is stored as the list of strictly greater elements of each
 * element.  Element numbering is expected to be a linear extension
 * (x < y implies index(x) < index(y)); all constructors in this library
 * produce such numberings and `from_relation` checks it.
 */
class Poset
{
public:
    Poset() = default;

    Poset(std::vector<std::string> labels, std::vector<std::vector<std::size_t>> above)
        : m_labels(std::move(labels)), m_above(std::move(above))
    {
        if (m_labels.size() != m_above.size()) throw input_error("poset: label/relation size mismatch");
        for (std::size_t i = 0; i < m_above.size(); ++i) {
            auto& a = m_above[i];
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
            for (std::size_t j : a) {
                if (j <= i || j >= m_above.size()) {
                    throw input_error("poset numbering is not a linear extension at " +
                                      m_labels[i]);
                }
            }
        }
    }

    /// Builds from an arbitrary relation by exhaustive evaluation.
    static Poset from_relation(std::vector<std::string> labels,
                               const std::function<bool(std::size_t, std::size_t)>& leq)
    {
        const std::size_t n = labels.size();
        std::vector<std::vector<std::size_t>> above(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && leq(i, j)) above[i].push_back(j);
            }
        }
        return Poset(std::move(labels), std::move(above));
    }

    /// The chain 0 < 1 < ... < n, i.e. the poset [n].
    static Poset chain(int n)
    {
        std::vector<std::string> labels;
        std::vector<std::vector<std::size_t>> above(n + 1);
        for (int i = 0; i <= n; ++i) {
            labels.push_back(std::to_string(i));
            for (int j = i + 1; j <= n; ++j) above[i].push_back(j);
        }
        return Poset(std::move(labels), std::move(above));
    }

    static Poset antichain(std::size_t k)
    {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < k; ++i) labels.push_back(std::to_string(i));
        return Poset(std::move(labels), std::vector<std::vector<std::size_t>>(k));
    }

    std::size_t size() const { return m_labels.size(); }
    const std::string& label(std::size_t i) const { return m_labels[i]; }
    const std::vector<std::string>& labels() const { return m_labels; }
    const std::vector<std::size_t>& above(std::size_t i) const { return m_above[i]; }

    bool leq(std::size_t x, std::size_t y) const
    {
        return x == y || std::binary_search(m_above[x].begin(), m_above[x].end(), y);
    }

    /// Reflexive, antisymmetric and transitive, checked exhaustively.
    bool is_partial_order() const
    {
        const std::size_t n = size();
        for (std::size_t x = 0; x < n; ++x) {
            for (std::size_t y : m_above[x]) {
                if (leq(y, x)) return false;
                for (std::size_t z : m_above[y]) {
                    if (!leq(x, z)) return false;
                }
            }
        }
        return true;
    }

    /// Calls fn(chain) for every nonempty chain, listed in increasing order.
    template <typename Fn>
    void for_each_chain(Fn&& fn, Budget& budget = unlimited_budget()) const
    {
        std::vector<std::size_t> chain;
        std::function<void()> extend = [&]() {
            budget.charge();
            fn(static_cast<const std::vector<std::size_t>&>(chain));
            const std::size_t last = chain.back();
            for (std::size_t y : m_above[last]) {
                chain.push_back(y);
                extend();
                chain.pop_back();
            }
        };
        for (std::size_t x = 0; x < size(); ++x) {
            chain.assign(1, x);
            extend();
        }
    }

private:
    std::vector<std::string> m_labels;
    std::vector<std::vector<std::size_t>> m_above;
};

/// Order-preserving element map between two posets.
struct MonotoneMap
{
    const Poset* source = nullptr;
    const Poset* target = nullptr;
    std::vector<std::size_t> assignment;

    std::size_t operator()(std::size_t x) const { return assignment.at(x); }

    bool is_monotone() const
    {
        for (std::size_t x = 0; x < source->size(); ++x) {
            for (std::size_t y : source->above(x)) {
                if (!target->leq(assignment[x], assignment[y])) return false;
            }
        }
        return true;
    }

    /// x < y implies f(x) < f(y).
    bool is_strictly_monotone() const
    {
        for (std::size_t x = 0; x < source->size(); ++x) {
            for (std::size_t y : source->above(x)) {
                if (assignment[x] == assignment[y] || !target->leq(assignment[x], assignment[y])) {
                    return false;
                }
            }
        }
        return true;
    }
};

/// FP(K): the nonempty simplexes of K ordered by inclusion, numbered canonically.
inline Poset face_poset(const SimplicialComplex& k)
{
    if (k.empty()) throw input_error("face poset of the empty complex");
    std::vector<std::string> labels;
    labels.reserve(k.size());
    std::vector<std::vector<std::size_t>> above(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
        const Simplex& s = k.simplex(i);
        labels.push_back(s.to_string());
        s.for_each_face([&](const Simplex& f) {
            std::size_t j = *k.index_of(f);
            if (j != i) above[j].push_back(i);
        });
    }
    return Poset(std::move(labels), std::move(above));
}

/// Δ(P): vertex i is element i of P; simplexes are the chains.
inline SimplicialComplex order_complex(const Poset& p, Budget& budget = unlimited_budget())
{
    std::vector<Simplex> chains;
    p.for_each_chain(
        [&](const std::vector<std::size_t>& c) {
            std::vector<VertexId> v(c.begin(), c.end());
            chains.push_back(Simplex::trusted(std::move(v)));
        },
        budget);
    return SimplicialComplex::from_closed(std::move(chains));
}

/**
 * K♭ = Δ(FP(K)).  Vertex i of the result is the simplex `k.simplex(i)`, so the
 * complex's own canonical order is the relabeling table.
 */
inline SimplicialComplex barycentric(const SimplicialComplex& k, Budget& budget = unlimited_budget())
{
    return order_complex(face_poset(k), budget);
}

/// D: FP(K) → [dim K], σ ↦ dim σ.  The target poset is owned by the caller.
inline MonotoneMap dim_map(const SimplicialComplex& k, const Poset& fp, const Poset& levels)
{
    if (k.empty()) throw input_error("dimension map of the empty complex");
    MonotoneMap d{&fp, &levels, {}};
    d.assignment.reserve(k.size());
    for (const Simplex& s : k.simplexes()) d.assignment.push_back(static_cast<std::size_t>(s.dim()));
    return d;
}

/**
 * f♭: K♭ → L♭, the order-complex image of FP(f).  `kflat` and `lflat` must be
 * barycentric(f.source()) and barycentric(f.target()).
 */
inline SimplicialMap induced_bary_map(const SimplicialMap& f, ComplexPtr kflat, ComplexPtr lflat)
{
    std::map<VertexId, VertexId> a;
    const auto& k = f.source();
    for (std::size_t i = 0; i < k.size(); ++i) {
        a.emplace_hint(a.end(), static_cast<VertexId>(i),
                       static_cast<VertexId>(*f.target().index_of(f(k.simplex(i)))));
    }
    return SimplicialMap::trusted(std::move(kflat), std::move(lflat), std::move(a));
}

inline SimplicialMap induced_bary_map(const SimplicialMap& f)
{
    return induced_bary_map(f, share(barycentric(f.source())), share(barycentric(f.target())));
}

}  // namespace nabla
