#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "complex.hpp"
#include "simplicial_map.hpp"

namespace nabla::gen {

/// Uniform integer in [0, k); plain modulo keeps results identical across standard libraries.
inline std::uint64_t below(std::mt19937_64& rng, std::uint64_t k) { return rng() % k; }

/// Random complex on vertices 0..vertices-1 generated by up to `max_gens` random simplexes.
inline SimplicialComplex random_complex(std::mt19937_64& rng, int vertices, int max_dim, int max_gens = 6)
{
    std::vector<Simplex> gens;
    const int count = 1 + static_cast<int>(below(rng, max_gens));
    for (int g = 0; g < count; ++g) {
        const int size = 1 + static_cast<int>(below(rng, std::min(max_dim + 1, vertices)));
        std::vector<VertexId> all(vertices);
        std::iota(all.begin(), all.end(), 0);
        // partial Fisher-Yates
        for (int i = 0; i < size; ++i) {
            std::swap(all[i], all[i + below(rng, vertices - i)]);
        }
        all.resize(size);
        gens.push_back(Simplex::from_unsorted(all));
    }
    return SimplicialComplex::closure_of(gens);
}

/// Random complex of dimension exactly `dim` (a top simplex is always included).
inline SimplicialComplex random_complex_of_dim(std::mt19937_64& rng, int vertices, int dim, int max_gens = 6)
{
    if (dim < 0 || dim >= vertices) throw parameter_error("random complex of dimension " + std::to_string(dim) +
                                                          " needs more than " + std::to_string(dim) + " vertices");
    SimplicialComplex k = random_complex(rng, vertices, dim, max_gens);
    if (k.dim() == dim) return k;
    std::vector<Simplex> gens = k.maximal_simplexes();
    std::vector<VertexId> all(vertices);
    std::iota(all.begin(), all.end(), 0);
    for (int i = 0; i <= dim; ++i) std::swap(all[i], all[i + below(rng, vertices - i)]);
    all.resize(dim + 1);
    gens.push_back(Simplex::from_unsorted(all));
    return SimplicialComplex::closure_of(gens);
}

/**
 * Random simplicial map out of `source`: vertices go to 0..spread-1 at random,
 * and the target is the image closure plus `extra` random simplexes on the
 * same vertex range.  spread == 1 gives a constant map.
 */
inline SimplicialMap random_map(std::mt19937_64& rng, ComplexPtr source, int spread, int extra_dim = 1,
                                int extra = 1)
{
    std::map<VertexId, VertexId> a;
    for (VertexId v : source->vertices()) a.emplace(v, static_cast<VertexId>(below(rng, spread)));
    std::vector<Simplex> gens;
    for (const Simplex& s : source->maximal_simplexes()) {
        std::vector<VertexId> img;
        for (VertexId v : s.vertices()) img.push_back(a.at(v));
        gens.push_back(Simplex::from_unsorted(img));
    }
    for (int e = 0; e < extra; ++e) {
        std::vector<VertexId> v;
        const int size = 1 + static_cast<int>(below(rng, std::min(extra_dim + 1, spread)));
        for (int i = 0; i < size; ++i) v.push_back(static_cast<VertexId>(below(rng, spread)));
        gens.push_back(Simplex::from_unsorted(v));
    }
    return SimplicialMap(source, share(SimplicialComplex::closure_of(gens)), std::move(a));
}

/// Random subcomplex: a random subset of the maximal simplexes, closed downward.
inline SimplicialComplex random_subcomplex(std::mt19937_64& rng, const SimplicialComplex& k)
{
    std::vector<Simplex> keep;
    for (const Simplex& s : k.simplexes()) {
        if (below(rng, 3) == 0) keep.push_back(s);
    }
    if (keep.empty() && !k.empty()) keep.push_back(k.simplex(below(rng, k.size())));
    return SimplicialComplex::closure_of(keep);
}

/**
 * One representative of every isomorphism class of simplicial complexes whose
 * vertex set is exactly {0, ..., k-1}, for 1 ≤ k ≤ max_vertices (≤ 5).
 * Representatives are the lexicographically least relabelings, listed by
 * vertex count and then canonical form.
 */
inline std::vector<SimplicialComplex> complexes_up_to_iso(int max_vertices)
{
    std::vector<SimplicialComplex> out;
    for (int k = 1; k <= max_vertices; ++k) {
        const std::uint32_t full = (1u << k) - 1;
        std::vector<std::uint32_t> faces;  // subsets of size >= 2, by size then value
        for (std::uint32_t s = 1; s <= full; ++s) {
            if (std::popcount(s) >= 2) faces.push_back(s);
        }
        std::stable_sort(faces.begin(), faces.end(),
                         [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
        std::vector<int> perm(k);
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<std::vector<int>> perms;
        do {
            perms.push_back(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));

        std::set<std::vector<std::uint32_t>> canon;
        std::vector<char> chosen(1u << k, 0);
        for (int v = 0; v < k; ++v) chosen[1u << v] = 1;

        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == faces.size()) {
                std::vector<std::uint32_t> best;
                bool first = true;
                for (const auto& p : perms) {
                    std::vector<std::uint32_t> img;
                    for (std::uint32_t s = 1; s <= full; ++s) {
                        if (!chosen[s] || std::popcount(s) < 2) continue;
                        std::uint32_t t = 0;
                        for (int v = 0; v < k; ++v) {
                            if (s & (1u << v)) t |= 1u << p[v];
                        }
                        img.push_back(t);
                    }
                    std::sort(img.begin(), img.end());
                    if (first || img < best) best = std::move(img);
                    first = false;
                }
                canon.insert(best);
                return;
            }
            const std::uint32_t s = faces[i];
            rec(i + 1);
            bool closed = true;
            for (int v = 0; v < k && closed; ++v) {
                if (s & (1u << v)) closed = chosen[s & ~(1u << v)];
            }
            if (closed) {
                chosen[s] = 1;
                rec(i + 1);
                chosen[s] = 0;
            }
        };
        rec(0);
        for (const auto& c : canon) {
            std::vector<Simplex> gens;
            for (int v = 0; v < k; ++v) gens.push_back(Simplex{static_cast<VertexId>(v)});
            for (std::uint32_t s : c) {
                std::vector<VertexId> vs;
                for (int v = 0; v < k; ++v) {
                    if (s & (1u << v)) vs.push_back(static_cast<VertexId>(v));
                }
                gens.emplace_back(vs);
            }
            out.push_back(SimplicialComplex::closure_of(gens));
        }
    }
    return out;
}

/**
 * A triangulated dunce hat: a triangle whose three sides are identified
 * (a, a, a⁻¹), each side subdivided as 1-2-3-1, with an inner ring of nine
 * vertices (4..12) and a center (13).  Contractible, and every edge lies in
 * at least two triangles, so no elementary collapse applies.
 */
inline SimplicialComplex dunce_hat()
{
    const std::vector<VertexId> rim{1, 2, 3, 1, 2, 3, 1, 3, 2};
    std::vector<Simplex> gens;
    for (std::size_t i = 0; i < rim.size(); ++i) {
        const std::size_t j = (i + 1) % rim.size();
        const VertexId ri = 4 + static_cast<VertexId>(i), rj = 4 + static_cast<VertexId>(j);
        gens.push_back(Simplex::from_unsorted({rim[i], rim[j], ri}));
        gens.push_back(Simplex::from_unsorted({rim[j], rj, ri}));
        gens.push_back(Simplex::from_unsorted({ri, rj, 13}));
    }
    return SimplicialComplex::closure_of(gens);
}

/// Six-vertex real projective plane.
inline SimplicialComplex projective_plane()
{
    return make_complex({{1, 2, 3}, {1, 3, 4}, {1, 4, 5}, {1, 5, 6}, {1, 2, 6},
                         {2, 3, 5}, {2, 4, 5}, {2, 4, 6}, {3, 4, 6}, {3, 5, 6}});
}

}  // namespace nabla::gen
