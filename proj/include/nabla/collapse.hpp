#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "complex.hpp"
#include "errors.hpp"
#include "grayson.hpp"
#include "resolution.hpp"

namespace nabla {

/**
 * Face structure of a finite regular complex (simplicial or cellular): the
 * facet/cofacet incidences plus a label index.  This is the "complex
 * descriptor" that certificates are replayed against.
 */
struct HasseComplex
{
    std::vector<std::string> labels;
    std::vector<int> dims;
    std::vector<std::vector<std::uint32_t>> facets;
    std::vector<std::vector<std::uint32_t>> cofacets;
    std::unordered_map<std::string, std::uint32_t> index;

    std::size_t size() const { return labels.size(); }

    std::uint32_t id(const std::string& label) const
    {
        auto it = index.find(label);
        if (it == index.end()) throw input_error("dangling label: " + label);
        return it->second;
    }

    std::optional<std::uint32_t> find(const std::string& label) const
    {
        auto it = index.find(label);
        if (it == index.end()) return std::nullopt;
        return it->second;
    }

    static HasseComplex of(const SimplicialComplex& k)
    {
        HasseComplex h;
        h.reserve(k.size());
        for (const Simplex& s : k.simplexes()) h.add(s.to_string(), s.dim());
        for (std::size_t i = 0; i < k.size(); ++i) {
            const Simplex& s = k.simplex(i);
            if (s.size() < 2) continue;
            for (std::size_t j = 0; j < s.size(); ++j) {
                h.link(static_cast<std::uint32_t>(*k.index_of(s.facet(j))),
                       static_cast<std::uint32_t>(i));
            }
        }
        return h;
    }

    static HasseComplex of(const CellComplex& cx)
    {
        HasseComplex h;
        h.reserve(cx.cells.size());
        for (const Cell& c : cx.cells) h.add(c.to_string(), c.dim());
        for (std::size_t i = 0; i < cx.cells.size(); ++i) {
            for (const Cell& f : cell_facets(cx.cells[i])) {
                h.link(static_cast<std::uint32_t>(cx.index.at(f)), static_cast<std::uint32_t>(i));
            }
        }
        return h;
    }

    long long euler_characteristic() const
    {
        long long chi = 0;
        for (int d : dims) chi += (d % 2 == 0) ? 1 : -1;
        return chi;
    }

private:
    void reserve(std::size_t n)
    {
        labels.reserve(n);
        dims.reserve(n);
        facets.reserve(n);
        cofacets.reserve(n);
        index.reserve(n);
    }

    void add(std::string label, int dim)
    {
        index.emplace(label, static_cast<std::uint32_t>(labels.size()));
        labels.push_back(std::move(label));
        dims.push_back(dim);
        facets.emplace_back();
        cofacets.emplace_back();
    }

    void link(std::uint32_t facet, std::uint32_t cell)
    {
        facets[cell].push_back(facet);
        cofacets[facet].push_back(cell);
    }
};

struct CollapseStep
{
    std::string free_face;
    std::string cofacet;

    friend bool operator==(const CollapseStep&, const CollapseStep&) = default;
};

struct CollapseSequence
{
    std::string start;   // e.g. "Q(1,3)" or "hat(n=2)"
    std::string finish;  // e.g. "Q(1,2)" or "e"
    std::vector<CollapseStep> steps;
};

struct ValidationReport
{
    bool ok = true;
    std::size_t steps_replayed = 0;
    std::optional<std::size_t> failed_step;
    std::string message;
    std::vector<long long> euler;         // before step 0, after each step
    std::vector<std::uint32_t> remaining;  // ids alive after the replay, ascending

    std::vector<std::string> remaining_labels(const HasseComplex& h) const
    {
        std::vector<std::string> out;
        for (auto id : remaining) out.push_back(h.labels[id]);
        return out;
    }
};

/**
 * Incremental replay of elementary collapses.  Each step must remove a pair
 * (τ, σ) where τ is a facet of σ, σ is maximal among the remaining cells and
 * σ is the only remaining cell having τ as a face.
 */
class CollapseReplayer
{
public:
    explicit CollapseReplayer(const HasseComplex& h, bool trace_euler = true)
        : m_h(h), m_alive(h.size(), 1), m_alive_cofacets(h.size()), m_trace(trace_euler)
    {
        for (std::size_t i = 0; i < h.size(); ++i) {
            m_alive_cofacets[i] = static_cast<std::uint32_t>(h.cofacets[i].size());
        }
        m_chi = h.euler_characteristic();
        if (m_trace) m_report.euler.push_back(m_chi);
    }

    /**
     * Returns false (and records the failure) if the step is not an elementary
     * collapse; throws input_error for labels that name no cell.
     */
    bool step(const std::string& free_face, const std::string& cofacet)
    {
        if (!m_report.ok) return false;
        return step(m_h.id(free_face), m_h.id(cofacet));
    }

    bool step(std::uint32_t f, std::uint32_t c)
    {
        if (!m_report.ok) return false;
        const std::string where = m_h.labels[f] + " < " + m_h.labels[c];
        if (!m_alive[f] || !m_alive[c]) return fail("cell already removed: " + where);
        if (m_h.dims[c] != m_h.dims[f] + 1) return fail("dimensions do not differ by one: " + where);
        const auto& fc = m_h.facets[c];
        if (std::find(fc.begin(), fc.end(), f) == fc.end()) return fail("not a facet: " + where);
        if (m_alive_cofacets[c] != 0) return fail("cofacet is not maximal: " + where);
        if (m_alive_cofacets[f] != 1) {
            return fail("face is not free (" + std::to_string(m_alive_cofacets[f]) +
                        " remaining cofacets): " + where);
        }
        remove(c);
        remove(f);
        // an elementary collapse removes one k-cell and one (k+1)-cell
        const long long before = m_chi;
        m_chi += (m_h.dims[f] % 2 == 0 ? -1 : 1) + (m_h.dims[c] % 2 == 0 ? -1 : 1);
        if (m_chi != before) return fail("euler characteristic changed at " + where);
        if (m_trace) m_report.euler.push_back(m_chi);
        ++m_report.steps_replayed;
        return true;
    }

    ValidationReport finish()
    {
        m_report.remaining.clear();
        for (std::size_t i = 0; i < m_alive.size(); ++i) {
            if (m_alive[i]) m_report.remaining.push_back(static_cast<std::uint32_t>(i));
        }
        return m_report;
    }

    bool alive(std::uint32_t id) const { return m_alive[id]; }

private:
    void remove(std::uint32_t id)
    {
        m_alive[id] = 0;
        for (auto g : m_h.facets[id]) --m_alive_cofacets[g];
    }

    bool fail(std::string msg)
    {
        m_report.ok = false;
        m_report.failed_step = m_report.steps_replayed;
        m_report.message = std::move(msg);
        return false;
    }

    const HasseComplex& m_h;
    std::vector<char> m_alive;
    std::vector<std::uint32_t> m_alive_cofacets;
    bool m_trace;
    long long m_chi = 0;
    ValidationReport m_report;
};

inline ValidationReport validate_sequence(const HasseComplex& h, const CollapseSequence& seq)
{
    CollapseReplayer r(h);
    for (const auto& s : seq.steps) {
        if (!r.step(s.free_face, s.cofacet)) break;
    }
    return r.finish();
}

/// True when the replay succeeded and exactly `expected` (labels) remains.
inline bool finishes_at(const HasseComplex& h, const ValidationReport& rep,
                        const std::vector<std::string>& expected)
{
    if (!rep.ok) return false;
    auto got = rep.remaining_labels(h);
    auto want = expected;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    return got == want;
}

// ---------------------------------------------------------------------------
// Collapses of Q(m, n)

using CellPair = std::pair<Cell, Cell>;  // (free face, cofacet)

/**
 * Collapse of Q(m, n) onto Q(m, floor) as (C⁻, C) pairs.
 *
 * Levels t = n, n-1, ..., floor+1 are peeled one at a time (Q(t) onto
 * Q(t-1)); inside a level the excessive cells are taken by decreasing
 * dimension, then increasing λ, then lexicographically.
 */
inline std::vector<CellPair> collapse_Q_pairs(int m, int n, int floor,
                                              Budget& budget = unlimited_budget())
{
    if (m < 0 || m > n) throw parameter_error("collapse_Q needs 0 <= m <= n");
    if (floor < m || floor > n) throw parameter_error("collapse_Q needs m <= floor <= n");
    const CellComplex q = enumerate_cells(m, n, Flavor::Q, budget);

    struct Item
    {
        int level, dim, lambda;
        const Cell* cell;
    };
    std::vector<Item> items;
    for (const Cell& c : q.cells) {
        if (c.max_level() <= floor) continue;
        const CellClass cls = classify_cell(c);
        if (cls.kind == CellKind::excessive) items.push_back({c.max_level(), c.dim(), cls.lambda, &c});
    }
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.level != b.level) return a.level > b.level;
        if (a.dim != b.dim) return a.dim > b.dim;
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        return lex_less(*a.cell, *b.cell);
    });
    std::vector<CellPair> pairs;
    pairs.reserve(items.size());
    for (const Item& it : items) pairs.emplace_back(*classify_cell(*it.cell).partner, *it.cell);
    return pairs;
}

inline std::string q_descriptor(int m, int n) { return "Q(" + std::to_string(m) + "," + std::to_string(n) + ")"; }

inline CollapseSequence collapse_Q(int m, int n, int floor, Budget& budget = unlimited_budget())
{
    CollapseSequence seq{q_descriptor(m, n), q_descriptor(m, floor), {}};
    for (auto& [f, c] : collapse_Q_pairs(m, n, floor, budget)) {
        seq.steps.push_back({f.to_string(), c.to_string()});
    }
    return seq;
}

/**
 * Collapse of Q(m, n) onto an arbitrary vertex ({d_0}, ..., {d_m}).
 *
 * For the terminal vertex this is collapse_Q(m, n, m).  Otherwise the
 * excessive/deficient matching is used for all cells of dimension ≥ 2, which
 * leaves the tree formed by the 0-cells and the excessive 1-cells; that tree
 * is then pruned leaf by leaf towards the requested vertex.
 */
inline std::vector<CellPair> collapse_Q_onto(int m, int n, const Cell& target,
                                             Budget& budget = unlimited_budget())
{
    if (target.m() != m || target.n() != n || target.dim() != 0 || !target.in_q()) {
        throw parameter_error("collapse target must be a 0-cell of Q(m, n)");
    }
    if (target == terminal_cell(m, n)) return collapse_Q_pairs(m, n, m, budget);

    const CellComplex q = enumerate_cells(m, n, Flavor::Q, budget);
    struct Item
    {
        int dim, lambda;
        const Cell* cell;
    };
    std::vector<Item> high;
    std::vector<const Cell*> edges;
    for (const Cell& c : q.cells) {
        const CellClass cls = classify_cell(c);
        if (cls.kind != CellKind::excessive) continue;
        if (c.dim() >= 2) high.push_back({c.dim(), cls.lambda, &c});
        else edges.push_back(&c);
    }
    std::sort(high.begin(), high.end(), [](const Item& a, const Item& b) {
        if (a.dim != b.dim) return a.dim > b.dim;
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        return lex_less(*a.cell, *b.cell);
    });
    std::vector<CellPair> pairs;
    for (const Item& it : high) pairs.emplace_back(*classify_cell(*it.cell).partner, *it.cell);

    // remaining 1-skeleton: all 0-cells, excessive 1-cells
    std::unordered_map<Cell, std::vector<std::pair<Cell, const Cell*>>, CellHash> adj;
    for (const Cell* e : edges) {
        const auto ends = cell_facets(*e);
        adj[ends[0]].emplace_back(ends[1], e);
        adj[ends[1]].emplace_back(ends[0], e);
    }
    for (auto& [v, nb] : adj) {
        std::sort(nb.begin(), nb.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    std::unordered_map<Cell, std::pair<int, const Cell*>, CellHash> seen;  // distance, parent edge
    std::deque<Cell> queue{target};
    seen[target] = {0, nullptr};
    std::vector<Cell> order;
    while (!queue.empty()) {
        Cell v = queue.front();
        queue.pop_front();
        order.push_back(v);
        for (const auto& [w, e] : adj[v]) {
            if (seen.count(w)) continue;
            seen[w] = {seen[v].first + 1, e};
            queue.push_back(w);
        }
    }
    std::stable_sort(order.begin(), order.end(), [&](const Cell& a, const Cell& b) {
        const int da = seen[a].first, db = seen[b].first;
        if (da != db) return da > db;
        return a < b;
    });
    for (const Cell& v : order) {
        if (seen[v].second) pairs.emplace_back(v, *seen[v].second);
    }
    return pairs;
}

// ---------------------------------------------------------------------------
// Collapses of K̂ⁿ

/// Vertices of K♭ simplex `s` read as indexes into K, and their dimensions.
inline std::vector<int> chain_dims(const Resolution& r, const Simplex& s)
{
    std::vector<int> d;
    for (VertexId v : s.vertices()) d.push_back(r.base->simplex(v).dim());
    return d;
}

/// Whether every base simplex of the K♭-simplex `s` lies in M.
inline bool chain_in(const Resolution& r, const Simplex& s, const SimplicialComplex& m)
{
    return std::all_of(s.vertices().begin(), s.vertices().end(),
                       [&](VertexId v) { return m.contains(r.base->simplex(v)); });
}

/**
 * The target of collapse_hat inside r.hat: e(K♭), or Mⁿ⁻¹ ∪ e(K♭) in the
 * relative case (with M's resolution vertices renumbered into K's).
 */
inline SimplicialComplex hat_collapse_target(const Resolution& r, const SimplicialComplex* rel)
{
    std::vector<Simplex> keep = r.embed_image().simplexes();
    if (rel) {
        for (const Simplex& tau : r.hat->simplexes()) {
            bool ok = true;
            for (VertexId id : tau.vertices()) {
                const auto rv = r.vertex(id);
                if (rv.level > r.n - 1 || !rel->contains(r.base->simplex(rv.base))) {
                    ok = false;
                    break;
                }
            }
            if (ok) keep.push_back(tau);
        }
    }
    return SimplicialComplex::from_closed(std::move(keep));
}

/**
 * Streams the collapse of K̂ⁿ onto e(K♭) (or onto M̂ⁿ⁻¹ ∪ e(K♭) when `rel` is
 * given) as (free face, cofacet) simplex pairs.
 *
 * Simplexes σ of K♭ are visited by decreasing dimension, ties in canonical
 * order; the simplexes of K̂ⁿ projecting onto σ correspond to the cells of
 * Q(σ, n), and the cell collapse is carried over by cell_to_simplex.
 */
template <typename Sink>
void collapse_hat_stream(const Resolution& r, const SimplicialComplex* rel, Sink&& sink,
                         Budget& budget = unlimited_budget())
{
    const int n = r.n;
    if (rel) {
        if (!rel->is_subcomplex_of(*r.base)) throw parameter_error("relative complex is not a subcomplex of K");
        if (rel->dim() > n - 1) throw parameter_error("relative complex needs dim M <= n - 1");
    }
    std::map<std::pair<bool, std::vector<int>>, std::vector<CellPair>> cache;
    const SimplicialComplex& flat = *r.flat;
    for (int m = flat.dim(); m >= 0; --m) {
        auto [first, last] = flat.range(m);
        for (std::size_t i = first; i < last; ++i) {
            const Simplex& sigma = flat.simplex(i);
            const bool relative = rel && chain_in(r, sigma, *rel);
            std::vector<int> d = chain_dims(r, sigma);
            auto key = std::make_pair(relative, relative ? std::vector<int>{m} : d);
            auto it = cache.find(key);
            if (it == cache.end()) {
                std::vector<CellPair> pairs;
                if (relative) {
                    pairs = collapse_Q_pairs(m, n, n - 1, budget);
                } else {
                    std::vector<LevelSet> sets;
                    for (int x : d) sets.push_back(singleton(x));
                    pairs = collapse_Q_onto(m, n, Cell(sets, n), budget);
                }
                it = cache.emplace(std::move(key), std::move(pairs)).first;
            }
            for (const auto& [f, c] : it->second) {
                sink(cell_to_simplex(f, sigma.vertices()), cell_to_simplex(c, sigma.vertices()));
            }
        }
    }
}

inline std::string hat_descriptor(int n) { return "hat(n=" + std::to_string(n) + ")"; }

inline CollapseSequence collapse_hat(const Resolution& r, const SimplicialComplex* rel = nullptr,
                                     Budget& budget = unlimited_budget())
{
    CollapseSequence seq{hat_descriptor(r.n), rel ? "hat(M,n-1)+e" : "e", {}};
    collapse_hat_stream(
        r, rel,
        [&](const Simplex& f, const Simplex& c) { seq.steps.push_back({f.to_string(), c.to_string()}); },
        budget);
    return seq;
}

// ---------------------------------------------------------------------------
// Search-based oracle

enum class OracleStatus { found, exhausted, budget_exhausted };

struct OracleResult
{
    OracleStatus status = OracleStatus::exhausted;
    std::optional<CollapseSequence> sequence;
    std::size_t nodes = 0;
};

/**
 * Depth-first search over elementary collapses of `h` onto the cells flagged
 * in `keep`.  Independent of the constructive matching; meant for complexes
 * with at most a few hundred cells.  Visited states are memoized.
 */
inline OracleResult greedy_oracle(const HasseComplex& h, const std::vector<char>& keep,
                                  std::size_t node_budget)
{
    const std::size_t size = h.size();
    for (std::size_t i = 0; i < size; ++i) {
        if (!keep[i]) continue;
        for (auto f : h.facets[i]) {
            if (!keep[f]) throw input_error("oracle target is not a subcomplex");
        }
    }
    OracleResult res;
    std::vector<char> alive(size, 1);
    std::vector<std::uint32_t> alive_cof(size);
    for (std::size_t i = 0; i < size; ++i) alive_cof[i] = static_cast<std::uint32_t>(h.cofacets[i].size());
    std::size_t removable = 0;
    for (char k : keep) removable += !k;

    std::unordered_set<std::string> visited;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> path;
    bool budget_hit = false;

    auto remove = [&](std::uint32_t id) {
        alive[id] = 0;
        for (auto g : h.facets[id]) --alive_cof[g];
    };
    auto restore = [&](std::uint32_t id) {
        alive[id] = 1;
        for (auto g : h.facets[id]) ++alive_cof[g];
    };

    std::function<bool()> dfs = [&]() -> bool {
        if (path.size() * 2 == removable) return true;
        if (++res.nodes > node_budget) {
            budget_hit = true;
            return false;
        }
        std::string state(alive.begin(), alive.end());
        if (!visited.insert(std::move(state)).second) return false;
        for (std::uint32_t f = 0; f < size; ++f) {
            if (!alive[f] || keep[f] || alive_cof[f] != 1) continue;
            std::uint32_t c = 0;
            for (auto x : h.cofacets[f]) {
                if (alive[x]) c = x;
            }
            if (keep[c] || alive_cof[c] != 0) continue;
            remove(c);
            remove(f);
            path.emplace_back(f, c);
            if (dfs()) return true;
            path.pop_back();
            restore(f);
            restore(c);
            if (budget_hit) return false;
        }
        return false;
    };

    if (dfs()) {
        res.status = OracleStatus::found;
        CollapseSequence seq{"search", "target", {}};
        for (auto [f, c] : path) seq.steps.push_back({h.labels[f], h.labels[c]});
        res.sequence = std::move(seq);
    } else {
        res.status = budget_hit ? OracleStatus::budget_exhausted : OracleStatus::exhausted;
    }
    return res;
}

}  // namespace nabla
