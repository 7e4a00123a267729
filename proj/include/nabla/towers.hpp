#pragma once

#include <optional>
#include <string>
#include <vector>

#include "complex.hpp"
#include "poset.hpp"
#include "resolution.hpp"
#include "simplicial_map.hpp"

namespace nabla {

/**
 * Finite truncation K_0 ← K_1 ← ... ← K_N of an inverse sequence; bonds[i]
 * is p_i: K_{i+1} → K_i.
 */
struct Tower
{
    std::vector<ComplexPtr> levels;
    std::vector<SimplicialMap> bonds;

    std::size_t size() const { return levels.size(); }

    void validate() const
    {
        if (levels.empty()) throw input_error("tower needs at least one level");
        if (bonds.size() + 1 != levels.size()) throw input_error("tower needs one bond per consecutive level pair");
        for (std::size_t i = 0; i < bonds.size(); ++i) {
            if (!SimplicialMap::same_complex(bonds[i].source_ptr(), levels[i + 1]) ||
                !SimplicialMap::same_complex(bonds[i].target_ptr(), levels[i])) {
                throw input_error("bond " + std::to_string(i) + " does not map level " +
                                  std::to_string(i + 1) + " to level " + std::to_string(i));
            }
        }
    }
};

/// One subcomplex L_i ⊆ K_i per level.
struct SubcomplexFamily
{
    std::vector<SimplicialComplex> members;
};

/// Iterated images from the top down: afterwards every bond is onto its target.
inline Tower surjectivize(const Tower& t)
{
    t.validate();
    const std::size_t top = t.size() - 1;
    std::vector<ComplexPtr> levels(t.size());
    levels[top] = t.levels[top];
    std::vector<SimplicialMap> bonds(t.bonds.size());
    for (std::size_t i = top; i-- > 0;) {
        const SimplicialMap& p = t.bonds[i];
        std::vector<Simplex> images;
        for (const Simplex& s : levels[i + 1]->maximal_simplexes()) images.push_back(p(s));
        levels[i] = share(SimplicialComplex::closure_of(images));
        bonds[i] = restrict_map(p, levels[i + 1], levels[i]);
    }
    return Tower{std::move(levels), std::move(bonds)};
}

inline bool bonds_surjective(const Tower& t)
{
    for (const auto& p : t.bonds) {
        if (!(image_subcomplex(p) == p.target())) return false;
    }
    return true;
}

/// Images p_i(...p_{level-1}(s)) for i = level-1 down to 0.
inline std::vector<Simplex> trace_simplex(const Tower& t, std::size_t level, const Simplex& s)
{
    t.validate();
    if (level >= t.size()) throw input_error("trace: level out of range");
    if (!t.levels[level]->contains(s)) {
        throw input_error("trace: " + s.to_string() + " is not a simplex of level " + std::to_string(level));
    }
    std::vector<Simplex> out;
    Simplex cur = s;
    for (std::size_t i = level; i-- > 0;) {
        cur = t.bonds[i](cur);
        out.push_back(cur);
    }
    return out;
}

/// Levelwise n-skeleta; simplicial maps never raise dimension, so bonds restrict.
inline Tower skeleton_tower(const Tower& t, int n)
{
    t.validate();
    Tower out;
    for (const auto& k : t.levels) out.levels.push_back(share(skeleton(*k, n)));
    for (std::size_t i = 0; i < t.bonds.size(); ++i) {
        out.bonds.push_back(restrict_map(t.bonds[i], out.levels[i + 1], out.levels[i]));
    }
    return out;
}

enum class FamilyMode { lfd, decomposable };

struct FamilyCheck
{
    bool ok = true;
    std::optional<std::size_t> level;  // level of the offending simplex
    std::optional<Simplex> simplex;
    std::string message;
};

/**
 * Per bond p_i, with P = p_i⁻¹(L_i) = {σ ∈ K_{i+1} : p_i(σ) ∈ L_i}:
 * lfd requires L_{i+1} ⊆ P, decomposable requires P ⊆ L_{i+1}.
 * The first violation by (level, canonical simplex order) is reported.
 */
inline FamilyCheck check_family(const Tower& t, const SubcomplexFamily& f, FamilyMode mode)
{
    t.validate();
    if (f.members.size() != t.size()) throw input_error("family has a different number of levels than the tower");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!f.members[i].is_subcomplex_of(*t.levels[i])) {
            throw input_error("family member " + std::to_string(i) + " is not a subcomplex of its level");
        }
    }
    for (std::size_t i = 0; i < t.bonds.size(); ++i) {
        const auto& p = t.bonds[i];
        const auto& lower = f.members[i];
        const auto& upper = f.members[i + 1];
        for (const Simplex& s : t.levels[i + 1]->simplexes()) {
            const bool in_preimage = lower.contains(p(s));
            const bool in_upper = upper.contains(s);
            const bool bad = mode == FamilyMode::lfd ? (in_upper && !in_preimage) : (in_preimage && !in_upper);
            if (bad) {
                FamilyCheck c;
                c.ok = false;
                c.level = i + 1;
                c.simplex = s;
                c.message = mode == FamilyMode::lfd
                                ? "simplex of L_" + std::to_string(i + 1) + " maps outside L_" + std::to_string(i)
                                : "simplex of the preimage of L_" + std::to_string(i) + " is not in L_" +
                                      std::to_string(i + 1);
                return c;
            }
        }
    }
    return {};
}

/// Skeleton family L_i = (K_i)^(n).
inline SubcomplexFamily skeleton_family(const Tower& t, int n)
{
    SubcomplexFamily f;
    for (const auto& k : t.levels) f.members.push_back(skeleton(*k, n));
    return f;
}

// ---------------------------------------------------------------------------
// Surjections between finite sets

/// A surjection [a] → [b] given by its values on 0..a.
using Surjection = std::vector<int>;

inline bool is_surjection(const Surjection& s, int b)
{
    std::vector<char> hit(b + 1, 0);
    for (int x : s) {
        if (x < 0 || x > b) return false;
        hit[x] = 1;
    }
    return std::all_of(hit.begin(), hit.end(), [](char h) { return h; });
}

inline Surjection compose_surjections(const Surjection& g, const Surjection& f)
{
    Surjection out;
    for (int x : f) out.push_back(g.at(x));
    return out;
}

/**
 * Factors s: [a] → [b] into a - b surjections, each merging exactly two
 * elements; listed in application order, so s = f_last ∘ ... ∘ f_first.
 *
 * At every step the lexicographically least pair (x, y), x < y, with equal
 * images is merged; y is absorbed into x and the elements above y shift down.
 * The leftover bijection is folded into the last factor.  For a = b the
 * result is empty when s is the identity and {s} otherwise.
 */
inline std::vector<Surjection> factor_surjection(const Surjection& s)
{
    if (s.empty()) throw input_error("surjection needs a nonempty domain");
    const int b = *std::max_element(s.begin(), s.end());
    if (!is_surjection(s, b)) throw input_error("map is not a surjection onto [0, max]");
    std::vector<Surjection> factors;
    std::vector<int> rest = s;  // current map from the shrinking domain to [b]
    while (static_cast<int>(rest.size()) - 1 > b) {
        std::optional<std::pair<int, int>> pair;
        for (int x = 0; x < static_cast<int>(rest.size()) && !pair; ++x) {
            for (int y = x + 1; y < static_cast<int>(rest.size()); ++y) {
                if (rest[x] == rest[y]) {
                    pair = {{x, y}};
                    break;
                }
            }
        }
        const auto [x, y] = *pair;
        Surjection merge;
        for (int e = 0; e < static_cast<int>(rest.size()); ++e) merge.push_back(e == y ? x : (e > y ? e - 1 : e));
        factors.push_back(std::move(merge));
        rest.erase(rest.begin() + y);
    }
    // rest is now a bijection [b] → [b]
    bool identity = true;
    for (int e = 0; e <= b; ++e) identity = identity && rest[e] == e;
    if (!identity) {
        if (factors.empty()) {
            factors.push_back(rest);
        } else {
            factors.back() = compose_surjections(rest, factors.back());
        }
    }
    return factors;
}

// ---------------------------------------------------------------------------
// ∇-resolution of a tower

struct ResolvedTower
{
    Tower tower;                        // levels hat(K_i, n), bonds lift(p_i, n)
    std::vector<Resolution> resolutions;
};

inline ResolvedTower resolve_tower(const Tower& t, int n, Budget& budget = unlimited_budget())
{
    t.validate();
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t.levels[i]->dim() > n) {
            throw parameter_error("level " + std::to_string(i) + " has dimension above n");
        }
    }
    ResolvedTower out;
    for (const auto& k : t.levels) {
        out.resolutions.push_back(resolve(k, n, budget));
        out.tower.levels.push_back(out.resolutions.back().hat);
    }
    for (std::size_t i = 0; i < t.bonds.size(); ++i) {
        out.tower.bonds.push_back(lift(t.bonds[i], out.resolutions[i + 1], out.resolutions[i]));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Example towers

struct TowerParams
{
    int p = 2;          // solenoid degree
    int c = 3;          // solenoid base cycle length
    int sphere_dim = 1;  // hawaiian earring sphere dimension
};

namespace detail {

inline SimplicialComplex path_complex(int edges)
{
    std::vector<Simplex> gens;
    for (int i = 0; i < edges; ++i) gens.push_back(Simplex{VertexId(i), VertexId(i + 1)});
    if (edges == 0) gens.push_back(Simplex{0});
    return SimplicialComplex::closure_of(gens);
}

inline SimplicialComplex cycle_complex(int length)
{
    std::vector<Simplex> gens;
    for (int i = 0; i < length; ++i) {
        gens.push_back(Simplex::from_unsorted({VertexId(i), VertexId((i + 1) % length)}));
    }
    return SimplicialComplex::closure_of(gens);
}

template <typename Fn>
SimplicialMap vertex_map(const ComplexPtr& src, const ComplexPtr& dst, Fn fn)
{
    std::map<VertexId, VertexId> a;
    for (VertexId v : src->vertices()) a.emplace_hint(a.end(), v, fn(v));
    return SimplicialMap(src, dst, std::move(a));
}

}  // namespace detail

/// Arcs J with 1, 2, ..., size segments; the last segment folds onto the previous one.
inline Tower sine_curve_tower(int size)
{
    Tower t;
    for (int i = 0; i < size; ++i) t.levels.push_back(share(detail::path_complex(i + 1)));
    for (int i = 0; i + 1 < size; ++i) {
        const VertexId last = static_cast<VertexId>(i + 2);
        t.bonds.push_back(detail::vertex_map(t.levels[i + 1], t.levels[i],
                                             [&](VertexId v) { return v == last ? last - 2 : v; }));
    }
    return t;
}

/**
 * Level i is the path [0, i+1]; each bond collapses the end edge [j-1, j] onto
 * j-1.  Vertex k stands for the point 2^-k of [0, 1].
 */
inline Tower nested_intervals_tower(int size)
{
    Tower t;
    for (int i = 0; i < size; ++i) t.levels.push_back(share(detail::path_complex(i + 1)));
    for (int i = 0; i + 1 < size; ++i) {
        const VertexId top = static_cast<VertexId>(i + 1);
        t.bonds.push_back(detail::vertex_map(t.levels[i + 1], t.levels[i],
                                             [&](VertexId v) { return std::min(v, top); }));
    }
    return t;
}

/// Wedges of 1, ..., size boundaries of Δ^{d+1} at vertex 0; bonds retract the last sphere.
inline Tower hawaiian_tower(int size, int d)
{
    const VertexId per = static_cast<VertexId>(d + 1);  // non-base vertices per sphere
    auto wedge = [&](int spheres) {
        std::vector<Simplex> gens;
        for (int s = 0; s < spheres; ++s) {
            std::vector<VertexId> vs{0};
            for (VertexId i = 0; i < per; ++i) vs.push_back(1 + s * per + i);
            for (std::size_t skip = 0; skip < vs.size(); ++skip) {
                std::vector<VertexId> f;
                for (std::size_t j = 0; j < vs.size(); ++j) {
                    if (j != skip) f.push_back(vs[j]);
                }
                gens.emplace_back(f);
            }
        }
        return SimplicialComplex::closure_of(gens);
    };
    Tower t;
    for (int i = 0; i < size; ++i) t.levels.push_back(share(wedge(i + 1)));
    for (int i = 0; i + 1 < size; ++i) {
        const VertexId first_new = 1 + static_cast<VertexId>(i + 1) * per;
        t.bonds.push_back(detail::vertex_map(t.levels[i + 1], t.levels[i],
                                             [&](VertexId v) { return v >= first_new ? 0 : v; }));
    }
    return t;
}

/// Cycles of length c·p^i with the p-fold covering v ↦ v mod c·p^i.
inline Tower solenoid_tower(int size, int p, int c)
{
    bool prime = p >= 2;
    for (int d = 2; d * d <= p && prime; ++d) prime = p % d != 0;
    if (!prime) throw input_error("solenoid degree must be a prime");
    if (c < 3) throw input_error("solenoid base cycle needs length >= 3");
    Tower t;
    long long len = c;
    std::vector<long long> lengths;
    for (int i = 0; i < size; ++i) {
        if (len > (1 << 24)) throw parameter_error("solenoid level too large");
        lengths.push_back(len);
        t.levels.push_back(share(detail::cycle_complex(static_cast<int>(len))));
        len *= p;
    }
    for (int i = 0; i + 1 < size; ++i) {
        const auto mod = static_cast<VertexId>(lengths[i]);
        t.bonds.push_back(detail::vertex_map(t.levels[i + 1], t.levels[i], [&](VertexId v) { return v % mod; }));
    }
    return t;
}

/**
 * Finite comb-and-flea graphs: a base path b_0..b_T (T = size) with a tooth
 * from every b_k.  In level i the teeth k < i have their own tops t_k, and
 * the tops of the teeth k ≥ i are identified to a single vertex.  Bonds send
 * the top of tooth i to the identified top.
 *
 * Vertex ids: b_k = k, t_k = T + 1 + k, identified top = 2T + 2.
 */
inline Tower comb_flea_tower(int size)
{
    const VertexId T = static_cast<VertexId>(size);
    const VertexId shared_top = 2 * T + 2;
    auto level = [&](int i) {
        std::vector<Simplex> gens;
        for (VertexId k = 0; k < T; ++k) gens.push_back(Simplex{k, k + 1});
        for (VertexId k = 0; k <= T; ++k) {
            const VertexId top = static_cast<int>(k) < i ? T + 1 + k : shared_top;
            gens.push_back(Simplex{k, top});
        }
        return SimplicialComplex::closure_of(gens);
    };
    Tower t;
    for (int i = 0; i < size; ++i) t.levels.push_back(share(level(i)));
    for (int i = 0; i + 1 < size; ++i) {
        const VertexId moved = T + 1 + static_cast<VertexId>(i);
        t.bonds.push_back(detail::vertex_map(t.levels[i + 1], t.levels[i],
                                             [&](VertexId v) { return v == moved ? shared_top : v; }));
    }
    return t;
}

/**
 * pt ⊔ Δ^1 ⊔ ... ⊔ Δ^i at level i; the bond sends the top simplex Δ^{i+1} to pt.
 * Vertex 0 is pt; Δ^j occupies the ids j(j+1)/2 .. j(j+1)/2 + j.
 */
inline Tower null_sequence_tower(int size)
{
    auto first_vertex = [](int j) { return static_cast<VertexId>(j * (j + 1) / 2); };
    auto level = [&](int i) {
        std::vector<Simplex> gens{Simplex{0}};
        for (int j = 1; j <= i; ++j) {
            std::vector<VertexId> v;
            for (int x = 0; x <= j; ++x) v.push_back(first_vertex(j) + x);
            gens.emplace_back(v);
        }
        return SimplicialComplex::closure_of(gens);
    };
    Tower t;
    for (int i = 0; i < size; ++i) t.levels.push_back(share(level(i)));
    for (int i = 0; i + 1 < size; ++i) {
        const VertexId first_top = first_vertex(i + 1);
        t.bonds.push_back(detail::vertex_map(t.levels[i + 1], t.levels[i],
                                             [&](VertexId v) { return v >= first_top ? 0 : v; }));
    }
    return t;
}

inline Tower example_tower(const std::string& name, int size, const TowerParams& params = {})
{
    if (size < 1) throw input_error("tower size must be >= 1");
    if (name == "sine_curve") return sine_curve_tower(size);
    if (name == "nested_intervals") return nested_intervals_tower(size);
    if (name == "hawaiian") {
        if (params.sphere_dim < 1) throw input_error("hawaiian sphere dimension must be >= 1");
        return hawaiian_tower(size, params.sphere_dim);
    }
    if (name == "solenoid") return solenoid_tower(size, params.p, params.c);
    if (name == "comb_flea") return comb_flea_tower(size);
    if (name == "null_sequence") return null_sequence_tower(size);
    throw input_error("unknown example tower: " + name);
}

inline std::vector<std::string> example_tower_names()
{
    return {"sine_curve", "nested_intervals", "hawaiian", "solenoid", "comb_flea", "null_sequence"};
}

}  // namespace nabla
