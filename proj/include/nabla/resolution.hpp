#pragma once

#include <string>
#include <vector>

#include "complex.hpp"
#include "poset.hpp"
#include "simplicial_map.hpp"

namespace nabla {

/// A vertex (σ, level) of K♭⊠Δⁿ; `base` indexes σ in K's canonical order.
struct ResolutionVertex
{
    std::size_t base;
    int level;

    friend bool operator==(const ResolutionVertex&, const ResolutionVertex&) = default;
};

/// Vertex ids of K♭⊠Δⁿ are base * (n + 1) + level.
inline VertexId resolution_vertex_id(std::size_t base, int level, int n)
{
    return static_cast<VertexId>(base * static_cast<std::size_t>(n + 1) + level);
}

inline ResolutionVertex resolution_vertex(VertexId id, int n)
{
    return {id / static_cast<std::size_t>(n + 1), static_cast<int>(id % (n + 1))};
}

namespace detail {

// Chains (σ_0, j_0) < ... < (σ_k, j_k) of FP(K) × [n] in the product order.
// With strict_levels the levels must increase strictly (the simplexes of K̂ⁿ).
inline std::vector<Simplex> product_chains(const SimplicialComplex& k, int n, bool strict_levels,
                                           Budget& budget)
{
    const Poset fp = face_poset(k);
    std::vector<Simplex> out;
    std::vector<VertexId> chain;
    std::vector<std::pair<std::size_t, int>> elems;

    std::function<void()> extend = [&]() {
        budget.charge();
        out.push_back(Simplex::trusted(chain));
        const auto [base, level] = elems.back();
        // successors: (τ, j') with τ ⊇ σ and j' ≥ j, not both equal
        auto visit = [&](std::size_t tau, int from_level) {
            for (int j = from_level; j <= n; ++j) {
                chain.push_back(resolution_vertex_id(tau, j, n));
                elems.emplace_back(tau, j);
                extend();
                elems.pop_back();
                chain.pop_back();
            }
        };
        visit(base, level + 1);
        for (std::size_t tau : fp.above(base)) visit(tau, strict_levels ? level + 1 : level);
    };

    for (std::size_t s = 0; s < k.size(); ++s) {
        for (int j = 0; j <= n; ++j) {
            chain.assign(1, resolution_vertex_id(s, j, n));
            elems.assign(1, {s, j});
            extend();
        }
    }
    return out;
}

}  // namespace detail

/// K♭⊠Δⁿ = Δ(FP(K) × [n]) with the product order.
inline SimplicialComplex boxtimes(const SimplicialComplex& k, int n, Budget& budget = unlimited_budget())
{
    if (k.empty()) throw input_error("boxtimes of the empty complex");
    if (n < 0) throw parameter_error("boxtimes needs n >= 0");
    return SimplicialComplex::from_closed(detail::product_chains(k, n, false, budget));
}

/**
 * The non-degenerate resolution K̂ⁿ together with the section e: K♭ → K̂ⁿ and
 * the projection p: K̂ⁿ → K♭.
 */
struct Resolution
{
    ComplexPtr base;  // K
    int n = 0;
    ComplexPtr flat;  // K♭, vertex i = base->simplex(i)
    ComplexPtr hat;   // K̂ⁿ ⊆ K♭⊠Δⁿ
    SimplicialMap embed;
    SimplicialMap project;

    VertexId vertex_id(std::size_t base_index, int level) const
    {
        return resolution_vertex_id(base_index, level, n);
    }

    ResolutionVertex vertex(VertexId id) const { return resolution_vertex(id, n); }

    /// "(v0 v1 ... @ level)" for a vertex of hat.
    std::string vertex_label(VertexId id) const
    {
        const auto rv = vertex(id);
        std::string s = "(";
        const Simplex& sigma = base->simplex(rv.base);
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            if (i) s += ' ';
            s += std::to_string(sigma[i]);
        }
        return s + " @ " + std::to_string(rv.level) + ")";
    }

    /// e(K♭) as a subcomplex of hat.
    SimplicialComplex embed_image() const { return image_subcomplex(embed); }
};

/// Builds K̂ⁿ; requires dim K ≤ n so that e lands in K̂ⁿ.
inline Resolution resolve(ComplexPtr k, int n, Budget& budget = unlimited_budget())
{
    if (k->empty()) throw input_error("resolution of the empty complex");
    if (n < 0 || k->dim() > n) {
        throw parameter_error("resolve needs dim K (" + std::to_string(k->dim()) +
                              ") <= n (" + std::to_string(n) + ")");
    }
    Resolution r;
    r.base = k;
    r.n = n;
    r.flat = share(barycentric(*k, budget));
    r.hat = share(SimplicialComplex::from_closed(detail::product_chains(*k, n, true, budget)));

    std::map<VertexId, VertexId> e, p;
    for (std::size_t i = 0; i < k->size(); ++i) {
        e.emplace_hint(e.end(), static_cast<VertexId>(i),
                       r.vertex_id(i, k->simplex(i).dim()));
    }
    for (VertexId v : r.hat->vertices()) {
        p.emplace_hint(p.end(), v, static_cast<VertexId>(r.vertex(v).base));
    }
    r.embed = SimplicialMap::trusted(r.flat, r.hat, std::move(e));
    r.project = SimplicialMap::trusted(r.hat, r.flat, std::move(p));
    return r;
}

inline Resolution resolve(const SimplicialComplex& k, int n, Budget& budget = unlimited_budget())
{
    return resolve(share(k), n, budget);
}

/**
 * f̂ⁿ: K̂ⁿ → L̂ⁿ, (σ, j) ↦ (f(σ), j), between already built resolutions of the
 * source and target of f (same n).
 */
inline SimplicialMap lift(const SimplicialMap& f, const Resolution& rk, const Resolution& rl)
{
    if (rk.n != rl.n) throw parameter_error("lift: resolutions use different n");
    if (!SimplicialMap::same_complex(f.source_ptr(), rk.base) ||
        !SimplicialMap::same_complex(f.target_ptr(), rl.base)) {
        throw input_error("lift: resolutions do not match the map");
    }
    const int n = rk.n;
    std::vector<std::size_t> image(f.source().size());
    for (std::size_t i = 0; i < image.size(); ++i) {
        image[i] = *f.target().index_of(f(f.source().simplex(i)));
    }
    std::map<VertexId, VertexId> a;
    for (VertexId v : rk.hat->vertices()) {
        const auto rv = rk.vertex(v);
        a.emplace_hint(a.end(), v, resolution_vertex_id(image[rv.base], rv.level, n));
    }
    return SimplicialMap::trusted(rk.hat, rl.hat, std::move(a));
}

struct Lift
{
    Resolution source;
    Resolution target;
    SimplicialMap map;
};

inline Lift lift(const SimplicialMap& f, int n, Budget& budget = unlimited_budget())
{
    if (f.source().dim() > n || f.target().dim() > n) {
        throw parameter_error("lift needs both complexes of dimension <= n");
    }
    Lift out{resolve(f.source_ptr(), n, budget), resolve(f.target_ptr(), n, budget), {}};
    out.map = lift(f, out.source, out.target);
    return out;
}

}  // namespace nabla
