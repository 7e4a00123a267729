#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "errors.hpp"

namespace nabla {

/// Thrown internally when 64-bit elimination would overflow.
struct overflow_signal
{};

namespace detail {

inline bool is_zero(std::int64_t x) { return x == 0; }
inline bool is_zero(const mpz_class& x) { return sgn(x) == 0; }
inline bool is_unit(std::int64_t x) { return x == 1 || x == -1; }
inline bool is_unit(const mpz_class& x) { return x == 1 || x == -1; }

// Promotion threshold for entry magnitudes (NABLA_KIT_ARBPREC_THRESHOLD).
inline std::int64_t arbprec_threshold()
{
    static const std::int64_t t = [] {
        if (const char* env = std::getenv("NABLA_KIT_ARBPREC_THRESHOLD")) {
            try {
                long long v = std::stoll(env);
                if (v > 0) return static_cast<std::int64_t>(v);
            } catch (...) {
            }
        }
        return std::int64_t{1} << 40;
    }();
    return t;
}

// a - q * b, checked
inline std::int64_t sub_mul(std::int64_t a, std::int64_t q, std::int64_t b)
{
    std::int64_t prod, out;
    if (__builtin_mul_overflow(q, b, &prod) || __builtin_sub_overflow(a, prod, &out)) {
        throw overflow_signal{};
    }
    const std::int64_t lim = arbprec_threshold();
    if (out > lim || out < -lim) throw overflow_signal{};
    return out;
}
inline mpz_class sub_mul(const mpz_class& a, const mpz_class& q, const mpz_class& b) { return a - q * b; }

inline std::int64_t abs_of(std::int64_t x) { return x < 0 ? -x : x; }
inline mpz_class abs_of(const mpz_class& x) { return abs(x); }

// floor-free division helper: truncating quotient
inline std::int64_t quot(std::int64_t a, std::int64_t b) { return a / b; }
inline mpz_class quot(const mpz_class& a, const mpz_class& b)
{
    mpz_class q;
    mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline std::string to_text(std::int64_t x) { return std::to_string(x); }
inline std::string to_text(const mpz_class& x) { return x.get_str(); }

/**
 * Smith normal form diagonal of a dense matrix (row-major, rows x cols).
 * Pivots are chosen with minimal magnitude to limit entry growth.  Returns the
 * nonzero invariant factors (positive, divisibility-ordered).
 */
template <typename T>
std::vector<T> dense_smith(std::vector<std::vector<T>> a)
{
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    std::vector<T> diag;
    std::size_t t = 0;
    while (t < rows && t < cols) {
        // smallest nonzero magnitude in the trailing block
        std::optional<std::pair<std::size_t, std::size_t>> best;
        for (std::size_t i = t; i < rows; ++i) {
            for (std::size_t j = t; j < cols; ++j) {
                if (is_zero(a[i][j])) continue;
                if (!best || abs_of(a[i][j]) < abs_of(a[best->first][best->second])) best = {{i, j}};
            }
        }
        if (!best) break;
        std::swap(a[t], a[best->first]);
        for (auto& row : a) std::swap(row[t], row[best->second]);

        bool done = false;
        while (!done) {
            done = true;
            // clear column t
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (is_zero(a[i][t])) continue;
                const T q = quot(a[i][t], a[t][t]);
                for (std::size_t j = t; j < cols; ++j) a[i][j] = sub_mul(a[i][j], q, a[t][j]);
                if (!is_zero(a[i][t])) {
                    std::swap(a[t], a[i]);
                    done = false;
                }
            }
            // clear row t
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (is_zero(a[t][j])) continue;
                const T q = quot(a[t][j], a[t][t]);
                for (std::size_t i = t; i < rows; ++i) a[i][j] = sub_mul(a[i][j], q, a[i][t]);
                if (!is_zero(a[t][j])) {
                    for (auto& row : a) std::swap(row[t], row[j]);
                    done = false;
                }
            }
            if (!done) continue;
            // enforce divisibility of the rest by the pivot
            for (std::size_t i = t + 1; i < rows && done; ++i) {
                for (std::size_t j = t + 1; j < cols; ++j) {
                    if (is_zero(a[i][j])) continue;
                    const T q = quot(a[i][j], a[t][t]);
                    if (!is_zero(sub_mul(a[i][j], q, a[t][t]))) {
                        // add row i to row t and redo
                        for (std::size_t k = t; k < cols; ++k) a[t][k] = sub_mul(a[t][k], T(-1), a[i][k]);
                        done = false;
                        break;
                    }
                }
            }
        }
        diag.push_back(abs_of(a[t][t]));
        ++t;
    }
    std::sort(diag.begin(), diag.end());
    return diag;
}

/**
 * Sparse integer matrix stored by columns, with a row -> columns index, for
 * Schur-complement elimination on unit pivots.
 */
template <typename T>
class SparseEliminator
{
public:
    using Column = std::vector<std::pair<std::uint32_t, T>>;  // sorted by row

    SparseEliminator(std::size_t rows, std::vector<Column> cols)
        : m_rows(rows), m_cols(std::move(cols)), m_row_cols(rows), m_col_alive(m_cols.size(), 1),
          m_row_alive(rows, 1)
    {
        for (std::uint32_t j = 0; j < m_cols.size(); ++j) {
            for (auto& [i, v] : m_cols[j]) m_row_cols[i].push_back(j);
        }
    }

    /// Returns (rank, invariant factors > 1).
    std::pair<std::size_t, std::vector<T>> reduce()
    {
        std::size_t rank = 0;
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::uint32_t j = 0; j < m_cols.size(); ++j) {
                if (!m_col_alive[j] || m_cols[j].empty()) continue;
                // unit pivot in this column with the sparsest row
                std::optional<std::size_t> pick;
                std::size_t best_cost = 0;
                for (std::size_t e = 0; e < m_cols[j].size(); ++e) {
                    if (!is_unit(m_cols[j][e].second)) continue;
                    const std::size_t cost = m_row_cols[m_cols[j][e].first].size();
                    if (!pick || cost < best_cost) {
                        pick = e;
                        best_cost = cost;
                    }
                }
                if (!pick) continue;
                pivot(j, *pick);
                ++rank;
                progress = true;
            }
        }
        // dense remainder
        std::vector<std::uint32_t> rows_left, cols_left;
        for (std::uint32_t j = 0; j < m_cols.size(); ++j) {
            if (m_col_alive[j] && !m_cols[j].empty()) cols_left.push_back(j);
        }
        std::vector<std::int64_t> row_pos(m_rows, -1);
        for (auto j : cols_left) {
            for (auto& [i, v] : m_cols[j]) {
                if (row_pos[i] < 0) {
                    row_pos[i] = static_cast<std::int64_t>(rows_left.size());
                    rows_left.push_back(i);
                }
            }
        }
        std::vector<T> factors;
        if (!cols_left.empty()) {
            std::vector<std::vector<T>> dense(rows_left.size(), std::vector<T>(cols_left.size(), T(0)));
            for (std::size_t c = 0; c < cols_left.size(); ++c) {
                for (auto& [i, v] : m_cols[cols_left[c]]) dense[row_pos[i]][c] = v;
            }
            for (T& d : dense_smith<T>(std::move(dense))) {
                ++rank;
                if (!is_unit(d)) factors.push_back(d);
            }
        }
        return {rank, factors};
    }

private:
    void pivot(std::uint32_t pc, std::size_t entry)
    {
        const std::uint32_t pr = m_cols[pc][entry].first;
        const T pv = m_cols[pc][entry].second;  // ±1
        Column pcol = m_cols[pc];
        // every other column with an entry in row pr gets col -= (a / pv) * pcol
        std::vector<std::uint32_t> targets;
        for (auto j : m_row_cols[pr]) {
            if (j != pc && m_col_alive[j]) targets.push_back(j);
        }
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
        for (auto j : targets) {
            auto& col = m_cols[j];
            auto it = std::lower_bound(col.begin(), col.end(), pr,
                                       [](const auto& e, std::uint32_t r) { return e.first < r; });
            if (it == col.end() || it->first != pr) continue;
            const T q = it->second * pv;  // a / pv since pv = ±1
            Column merged;
            merged.reserve(col.size() + pcol.size());
            std::size_t a = 0, b = 0;
            while (a < col.size() || b < pcol.size()) {
                if (b == pcol.size() || (a < col.size() && col[a].first < pcol[b].first)) {
                    merged.push_back(col[a++]);
                } else if (a == col.size() || pcol[b].first < col[a].first) {
                    T v = sub_mul(T(0), q, pcol[b].second);
                    m_row_cols[pcol[b].first].push_back(j);
                    merged.emplace_back(pcol[b].first, std::move(v));
                    ++b;
                } else {
                    T v = sub_mul(col[a].second, q, pcol[b].second);
                    if (!is_zero(v)) merged.emplace_back(col[a].first, std::move(v));
                    ++a;
                    ++b;
                }
            }
            col = std::move(merged);
        }
        // drop the pivot row and column
        m_col_alive[pc] = 0;
        m_cols[pc].clear();
        m_row_alive[pr] = 0;
        for (auto j : targets) {
            auto& col = m_cols[j];
            col.erase(std::remove_if(col.begin(), col.end(), [&](const auto& e) { return e.first == pr; }),
                      col.end());
        }
        m_row_cols[pr].clear();
        // compact row indexes of the touched rows
        for (auto& [i, v] : pcol) {
            auto& rc = m_row_cols[i];
            rc.erase(std::remove_if(rc.begin(), rc.end(),
                                    [&](std::uint32_t j) { return !m_col_alive[j] || !has_entry(j, i); }),
                     rc.end());
            std::sort(rc.begin(), rc.end());
            rc.erase(std::unique(rc.begin(), rc.end()), rc.end());
        }
    }

    bool has_entry(std::uint32_t col, std::uint32_t row) const
    {
        const auto& c = m_cols[col];
        auto it = std::lower_bound(c.begin(), c.end(), row,
                                   [](const auto& e, std::uint32_t r) { return e.first < r; });
        return it != c.end() && it->first == row;
    }

    std::size_t m_rows;
    std::vector<Column> m_cols;
    std::vector<std::vector<std::uint32_t>> m_row_cols;
    std::vector<char> m_col_alive;
    std::vector<char> m_row_alive;
};

}  // namespace detail

/// Rank and nontrivial invariant factors of an integer matrix.
struct SmithSummary
{
    std::size_t rank = 0;
    std::vector<std::string> torsion;  // decimal, ascending
    bool used_arbitrary_precision = false;
};

/**
 * Sparse integer matrix given by columns of (row, value) with rows sorted.
 * Runs in 64-bit arithmetic and transparently restarts with GMP integers if
 * any intermediate entry would exceed the promotion threshold.
 */
inline SmithSummary smith_summary(std::size_t rows,
                                  const std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>>& cols)
{
    SmithSummary out;
    try {
        detail::SparseEliminator<std::int64_t> e(rows, cols);
        auto [rank, factors] = e.reduce();
        out.rank = rank;
        for (auto f : factors) out.torsion.push_back(detail::to_text(f));
        return out;
    } catch (const overflow_signal&) {
    }
    std::vector<std::vector<std::pair<std::uint32_t, mpz_class>>> big(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        for (auto& [i, v] : cols[j]) big[j].emplace_back(i, mpz_class(static_cast<long>(v)));
    }
    detail::SparseEliminator<mpz_class> e(rows, std::move(big));
    auto [rank, factors] = e.reduce();
    out.rank = rank;
    for (auto& f : factors) out.torsion.push_back(detail::to_text(f));
    out.used_arbitrary_precision = true;
    return out;
}

}  // namespace nabla
