#pragma once

#include <map>
#include <string>
#include <vector>

#include "complex.hpp"

namespace nabla {

/**
 * A vertex assignment between two complexes that carries every simplex of
 * the source onto a simplex of the target.  Validated on construction.
 */
class SimplicialMap
{
public:
    SimplicialMap() = default;

    SimplicialMap(ComplexPtr source, ComplexPtr target, std::map<VertexId, VertexId> assignment)
        : m_source(std::move(source)), m_target(std::move(target)),
          m_assignment(std::move(assignment))
    {
        validate();
    }

    /// Skips the simplex-by-simplex check; for maps that are simplicial by construction.
    static SimplicialMap trusted(ComplexPtr source, ComplexPtr target,
                                 std::map<VertexId, VertexId> assignment)
    {
        SimplicialMap f;
        f.m_source = std::move(source);
        f.m_target = std::move(target);
        f.m_assignment = std::move(assignment);
        return f;
    }

    static SimplicialMap identity(ComplexPtr k)
    {
        std::map<VertexId, VertexId> a;
        for (VertexId v : k->vertices()) a.emplace_hint(a.end(), v, v);
        return trusted(k, k, std::move(a));
    }

    const SimplicialComplex& source() const { return *m_source; }
    const SimplicialComplex& target() const { return *m_target; }
    const ComplexPtr& source_ptr() const { return m_source; }
    const ComplexPtr& target_ptr() const { return m_target; }
    const std::map<VertexId, VertexId>& assignment() const { return m_assignment; }

    VertexId operator()(VertexId v) const
    {
        auto it = m_assignment.find(v);
        if (it == m_assignment.end()) {
            throw input_error("vertex " + std::to_string(v) + " not in map domain");
        }
        return it->second;
    }

    Simplex operator()(const Simplex& s) const
    {
        std::vector<VertexId> img;
        img.reserve(s.size());
        for (VertexId v : s.vertices()) img.push_back((*this)(v));
        return Simplex::from_unsorted(std::move(img));
    }

    /// Vertex-level equality on identical (by content) source and target.
    friend bool operator==(const SimplicialMap& a, const SimplicialMap& b)
    {
        return a.m_assignment == b.m_assignment && same_complex(a.m_source, b.m_source) &&
               same_complex(a.m_target, b.m_target);
    }

    static bool same_complex(const ComplexPtr& a, const ComplexPtr& b)
    {
        return a == b || (a && b && *a == *b);
    }

private:
    void validate() const
    {
        if (!m_source || !m_target) throw input_error("map needs source and target");
        for (VertexId v : m_source->vertices()) {
            if (!m_assignment.count(v)) {
                throw input_error("map is not total: vertex " + std::to_string(v) +
                                  " unassigned");
            }
        }
        for (const auto& [v, w] : m_assignment) {
            if (!m_source->has_vertex(v)) {
                throw input_error("map assigns unknown source vertex " + std::to_string(v));
            }
            if (!m_target->has_vertex(w)) {
                throw input_error("map sends " + std::to_string(v) +
                                  " to a non-vertex " + std::to_string(w));
            }
        }
        for (const Simplex& s : m_source->maximal_simplexes()) {
            if (!m_target->contains((*this)(s))) {
                throw input_error("image of " + s.to_string() + " is not a simplex of the target");
            }
        }
    }

    ComplexPtr m_source;
    ComplexPtr m_target;
    std::map<VertexId, VertexId> m_assignment;
};

/// g ∘ f; requires f.target == g.source.
inline SimplicialMap compose(const SimplicialMap& g, const SimplicialMap& f)
{
    if (!SimplicialMap::same_complex(f.target_ptr(), g.source_ptr())) {
        throw input_error("compose: f.target differs from g.source");
    }
    std::map<VertexId, VertexId> a;
    for (const auto& [v, w] : f.assignment()) a.emplace_hint(a.end(), v, g(w));
    return SimplicialMap::trusted(f.source_ptr(), g.target_ptr(), std::move(a));
}

/// Injective on the vertex set of every simplex, i.e. dim f(σ) = dim σ throughout.
inline bool is_nondegenerate(const SimplicialMap& f)
{
    // a map is injective on a simplex iff it is injective on each of its edges
    auto [first, last] = f.source().range(1);
    for (std::size_t i = first; i < last; ++i) {
        const Simplex& e = f.source().simplex(i);
        if (f(e[0]) == f(e[1])) return false;
    }
    return true;
}

/// Smallest subcomplex of the target containing f(σ) for every source simplex σ.
inline SimplicialComplex image_subcomplex(const SimplicialMap& f)
{
    std::vector<Simplex> images;
    for (const Simplex& s : f.source().maximal_simplexes()) images.push_back(f(s));
    return SimplicialComplex::closure_of(images);
}

/// Restriction of f to a subcomplex of its source, landing in a subcomplex of its target.
inline SimplicialMap restrict_map(const SimplicialMap& f, ComplexPtr source, ComplexPtr target)
{
    std::map<VertexId, VertexId> a;
    for (VertexId v : source->vertices()) a.emplace_hint(a.end(), v, f(v));
    return SimplicialMap(std::move(source), std::move(target), std::move(a));
}

}  // namespace nabla
