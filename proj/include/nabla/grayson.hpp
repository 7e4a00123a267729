#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "resolution.hpp"
#include "simplex.hpp"

namespace nabla {

using LevelSet = std::uint64_t;  // bitmask over [0, n], n <= 62

inline int set_min(LevelSet s) { return std::countr_zero(s); }
inline int set_max(LevelSet s) { return 63 - std::countl_zero(s); }
inline int set_size(LevelSet s) { return std::popcount(s); }
inline LevelSet singleton(int i) { return LevelSet{1} << i; }

/// X ≤ Y: every element of X is ≤ every element of Y.
inline bool weakly_before(LevelSet x, LevelSet y) { return set_max(x) <= set_min(y); }
/// X < Y: every element of X is < every element of Y.
inline bool strictly_before(LevelSet x, LevelSet y) { return set_max(x) < set_min(y); }

/**
 * A cell (A_0, ..., A_m) of R(σ, n): nonempty subsets of [n] with
 * A_0 ≤ ... ≤ A_m.  Geometrically the product of simplexes of dimensions
 * |A_i| - 1; its dimension is Σ|A_i| - (m + 1).
 */
class Cell
{
public:
    Cell() = default;
    Cell(std::vector<LevelSet> sets, int n) : m_sets(std::move(sets)), m_n(n) {}

    /// From explicit element lists, e.g. Cell::of({{0}, {0, 1, 2}}, 2).
    static Cell of(const std::vector<std::vector<int>>& sets, int n)
    {
        std::vector<LevelSet> masks;
        for (const auto& s : sets) {
            LevelSet mask = 0;
            for (int x : s) {
                if (x < 0 || x > n) throw input_error("cell element out of [0, n]");
                mask |= singleton(x);
            }
            if (!mask) throw input_error("cell sets must be nonempty");
            masks.push_back(mask);
        }
        return Cell(std::move(masks), n);
    }

    int m() const { return static_cast<int>(m_sets.size()) - 1; }
    int n() const { return m_n; }
    const std::vector<LevelSet>& sets() const { return m_sets; }
    LevelSet set(int i) const { return m_sets[i]; }

    int dim() const
    {
        int total = 0;
        for (LevelSet s : m_sets) total += set_size(s);
        return total - (m() + 1);
    }

    LevelSet support() const
    {
        LevelSet u = 0;
        for (LevelSet s : m_sets) u |= s;
        return u;
    }

    int max_level() const { return set_max(m_sets.back()); }

    bool in_r() const
    {
        for (std::size_t i = 0; i < m_sets.size(); ++i) {
            if (!m_sets[i]) return false;
            if (i && !weakly_before(m_sets[i - 1], m_sets[i])) return false;
        }
        return !m_sets.empty();
    }

    bool in_q() const
    {
        for (std::size_t i = 0; i < m_sets.size(); ++i) {
            if (!m_sets[i]) return false;
            if (i && !strictly_before(m_sets[i - 1], m_sets[i])) return false;
        }
        return !m_sets.empty();
    }

    bool is_face_of(const Cell& c) const
    {
        if (c.m_sets.size() != m_sets.size()) return false;
        for (std::size_t i = 0; i < m_sets.size(); ++i) {
            if ((m_sets[i] & ~c.m_sets[i]) != 0) return false;
        }
        return true;
    }

    /// Factor dimensions (|A_0| - 1, ..., |A_m| - 1) of the product-of-simplexes cell.
    std::vector<int> factor_dims() const
    {
        std::vector<int> d;
        for (LevelSet s : m_sets) d.push_back(set_size(s) - 1);
        return d;
    }

    /// "{0}{0,1,2}"
    std::string to_string() const
    {
        std::string out;
        for (LevelSet s : m_sets) {
            out += '{';
            bool first = true;
            for (int x = 0; x <= 63; ++x) {
                if (s & singleton(x)) {
                    if (!first) out += ',';
                    out += std::to_string(x);
                    first = false;
                }
            }
            out += '}';
        }
        return out;
    }

    static Cell parse(const std::string& text, int n)
    {
        std::vector<std::vector<int>> sets;
        std::size_t i = 0;
        while (i < text.size()) {
            if (text[i] != '{') throw input_error("bad cell label: " + text);
            std::size_t close = text.find('}', i);
            if (close == std::string::npos) throw input_error("bad cell label: " + text);
            std::vector<int> elems;
            std::size_t pos = i + 1;
            while (pos < close) {
                std::size_t comma = text.find(',', pos);
                if (comma == std::string::npos || comma > close) comma = close;
                elems.push_back(std::stoi(text.substr(pos, comma - pos)));
                pos = comma + 1;
            }
            sets.push_back(std::move(elems));
            i = close + 1;
        }
        return of(sets, n);
    }

    /// Lexicographic on the tuple of sorted element lists.
    friend bool lex_less(const Cell& a, const Cell& b)
    {
        for (std::size_t i = 0; i < std::min(a.m_sets.size(), b.m_sets.size()); ++i) {
            if (a.m_sets[i] == b.m_sets[i]) continue;
            return sorted_list_less(a.m_sets[i], b.m_sets[i]);
        }
        return a.m_sets.size() < b.m_sets.size();
    }

    /// Canonical order: by dimension, then lexicographic.
    friend bool operator<(const Cell& a, const Cell& b)
    {
        const int da = a.dim(), db = b.dim();
        if (da != db) return da < db;
        return lex_less(a, b);
    }
    friend bool operator==(const Cell& a, const Cell& b) = default;

private:
    // Compare the increasing element lists of two distinct masks.
    static bool sorted_list_less(LevelSet x, LevelSet y)
    {
        while (x && y) {
            const int ax = set_min(x), ay = set_min(y);
            if (ax != ay) return ax < ay;
            x &= x - 1;
            y &= y - 1;
        }
        return !x && y;  // proper prefix comes first
    }

    std::vector<LevelSet> m_sets;
    int m_n = 0;
};

struct CellHash
{
    std::size_t operator()(const Cell& c) const noexcept
    {
        std::uint64_t h = 1469598103934665603ull;
        for (LevelSet s : c.sets()) {
            h ^= s;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

enum class Flavor { R, Q };

/// All cells of R(m, n) or Q(m, n) in canonical order.
struct CellComplex
{
    int m = 0;
    int n = 0;
    Flavor flavor = Flavor::Q;
    std::vector<Cell> cells;
    std::unordered_map<Cell, std::size_t, CellHash> index;

    bool contains(const Cell& c) const { return index.count(c) != 0; }

    int dim() const { return cells.empty() ? -1 : cells.back().dim(); }

    std::size_t count(int k) const
    {
        return static_cast<std::size_t>(
            std::count_if(cells.begin(), cells.end(), [k](const Cell& c) { return c.dim() == k; }));
    }

    long long euler_characteristic() const
    {
        long long chi = 0;
        for (const Cell& c : cells) chi += (c.dim() % 2 == 0) ? 1 : -1;
        return chi;
    }
};

inline CellComplex enumerate_cells(int m, int n, Flavor flavor, Budget& budget = unlimited_budget())
{
    if (m < 0 || n < 0) throw parameter_error("enumerate_cells needs m, n >= 0");
    if (n > 62) throw parameter_error("n must be <= 62");
    if (flavor == Flavor::Q && m > n) {
        throw parameter_error("Q(m, n) has no cells when m > n");
    }
    CellComplex cx{m, n, flavor, {}, {}};
    std::vector<LevelSet> sets;
    const LevelSet full = (n == 63) ? ~LevelSet{0} : (singleton(n + 1) - 1);

    // A_i ranges over nonempty subsets of [lo, n]; lo = max A_{i-1} (R) or that + 1 (Q).
    std::function<void(int)> rec = [&](int lo) {
        if (static_cast<int>(sets.size()) == m + 1) {
            budget.charge();
            cx.cells.emplace_back(sets, n);
            return;
        }
        if (lo > n) return;
        const LevelSet allowed = full & ~(singleton(lo) - 1);
        // enumerate nonempty submasks of `allowed`
        for (LevelSet sub = allowed; sub; sub = (sub - 1) & allowed) {
            sets.push_back(sub);
            rec(flavor == Flavor::R ? set_max(sub) : set_max(sub) + 1);
            sets.pop_back();
        }
    };
    rec(0);
    std::sort(cx.cells.begin(), cx.cells.end());
    cx.index.reserve(cx.cells.size());
    for (std::size_t i = 0; i < cx.cells.size(); ++i) cx.index.emplace(cx.cells[i], i);
    return cx;
}

/// All proper faces (B_0 ⊆ A_0, ..., B_m ⊆ A_m, all nonempty), canonical order.
inline std::vector<Cell> cell_faces(const Cell& c)
{
    std::vector<Cell> out;
    std::vector<LevelSet> cur(c.sets().size());
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == cur.size()) {
            if (cur != c.sets()) out.emplace_back(cur, c.n());
            return;
        }
        const LevelSet a = c.set(static_cast<int>(i));
        for (LevelSet sub = a; sub; sub = (sub - 1) & a) {
            cur[i] = sub;
            rec(i + 1);
        }
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
}

/// Faces of codimension one: drop one element from some A_i with |A_i| ≥ 2.
inline std::vector<Cell> cell_facets(const Cell& c)
{
    std::vector<Cell> out;
    for (int i = 0; i <= c.m(); ++i) {
        LevelSet a = c.set(i);
        if (set_size(a) < 2) continue;
        for (LevelSet rest = a; rest; rest &= rest - 1) {
            const LevelSet bit = rest & (~rest + 1);
            std::vector<LevelSet> sets = c.sets();
            sets[i] = a & ~bit;
            out.emplace_back(std::move(sets), c.n());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

enum class CellKind { terminal, excessive, deficient };

inline const char* to_string(CellKind k)
{
    switch (k) {
    case CellKind::terminal: return "terminal";
    case CellKind::excessive: return "excessive";
    case CellKind::deficient: return "deficient";
    }
    return "?";
}

struct CellClass
{
    int lambda = 0;
    CellKind kind = CellKind::terminal;
    std::optional<Cell> partner;  // C⁻ when excessive, C⁺ when deficient
};

/// λ_C: the largest λ with A_i = {i} for all i < λ.
inline int cell_lambda(const Cell& c)
{
    int lambda = 0;
    while (lambda <= c.m() && c.set(lambda) == singleton(lambda)) ++lambda;
    return lambda;
}

inline CellClass classify_cell(const Cell& c)
{
    if (!c.in_q()) throw input_error("classify_cell: " + c.to_string() + " is not a cell of Q");
    CellClass out;
    out.lambda = cell_lambda(c);
    if (out.lambda == c.m() + 1) {
        out.kind = CellKind::terminal;
        return out;
    }
    const int l = out.lambda;
    std::vector<LevelSet> sets = c.sets();
    if (sets[l] & singleton(l)) {
        out.kind = CellKind::excessive;
        sets[l] &= ~singleton(l);
    } else {
        out.kind = CellKind::deficient;
        sets[l] |= singleton(l);
    }
    out.partner = Cell(std::move(sets), c.n());
    return out;
}

/// The terminal 0-cell ({0}, {1}, ..., {m}).
inline Cell terminal_cell(int m, int n)
{
    std::vector<LevelSet> sets;
    for (int i = 0; i <= m; ++i) sets.push_back(singleton(i));
    return Cell(std::move(sets), n);
}

/**
 * The simplex τ_0 * ... * τ_m of K♭⊠Δⁿ, τ_i = {(v_i, j) : j ∈ A_i}, where
 * `chain` lists the vertices v_0 < ... < v_m of a simplex of K♭ (i.e. indexes
 * of a chain of simplexes of K).
 */
inline Simplex cell_to_simplex(const Cell& c, std::span<const VertexId> chain)
{
    if (chain.size() != c.sets().size()) {
        throw input_error("cell_to_simplex: cell has " + std::to_string(c.sets().size()) +
                          " sets but the chain has " + std::to_string(chain.size()) + " vertices");
    }
    std::vector<VertexId> v;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        for (LevelSet s = c.set(static_cast<int>(i)); s; s &= s - 1) {
            v.push_back(resolution_vertex_id(chain[i], set_min(s), c.n()));
        }
    }
    return Simplex::trusted(std::move(v));
}

/// Inverse of cell_to_simplex: the projected chain of K♭ and the cell.
inline std::pair<std::vector<VertexId>, Cell> simplex_to_cell(const Simplex& tau, int n)
{
    std::vector<VertexId> chain;
    std::vector<LevelSet> sets;
    for (VertexId id : tau.vertices()) {
        const auto rv = resolution_vertex(id, n);
        if (chain.empty() || chain.back() != rv.base) {
            chain.push_back(static_cast<VertexId>(rv.base));
            sets.push_back(0);
        }
        sets.back() |= singleton(rv.level);
    }
    return {std::move(chain), Cell(std::move(sets), n)};
}

/**
 * Listing of R(m, n) or Q(m, n) grouped by dimension, highest first:
 *   # R(1,2) cells=12 dim=2
 *   dim 2 count=3
 *   {0}{0,1,2} factors=(0,2) lambda=1 kind=deficient partner={0}{0,1,2}
 * Classification columns are "-" for cells outside Q.
 */
inline std::string format_cell_listing(const CellComplex& cx)
{
    std::string out = std::string("# ") + (cx.flavor == Flavor::R ? "R(" : "Q(") + std::to_string(cx.m) + "," +
                      std::to_string(cx.n) + ") cells=" + std::to_string(cx.cells.size()) +
                      " dim=" + std::to_string(cx.dim()) + "\n";
    for (int d = cx.dim(); d >= 0; --d) {
        out += "dim " + std::to_string(d) + " count=" + std::to_string(cx.count(d)) + "\n";
        for (const Cell& c : cx.cells) {
            if (c.dim() != d) continue;
            out += c.to_string() + " factors=(";
            const auto f = c.factor_dims();
            for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + std::to_string(f[i]);
            out += ")";
            if (c.in_q()) {
                const CellClass cls = classify_cell(c);
                out += " lambda=" + std::to_string(cls.lambda) + " kind=" + to_string(cls.kind) +
                       " partner=" + (cls.partner ? cls.partner->to_string() : std::string("-"));
            } else {
                out += " lambda=- kind=- partner=-";
            }
            out += "\n";
        }
    }
    return out;
}

}  // namespace nabla
