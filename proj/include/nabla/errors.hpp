#pragma once

#include <chrono>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace nabla {

/// Malformed input: unsorted simplex, dangling label, mismatched family, etc.
class input_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// An operation was called outside its parameter range (e.g. dim K > n).
class parameter_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A cell/simplex count or wall-clock budget was exhausted.
class budget_exceeded : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/**
 * Resource guard threaded through the enumerating operations.
 *
 * `charge(k)` accounts for k newly materialized cells or simplexes and throws
 * budget_exceeded once either limit is crossed.  A default-constructed Budget
 * is unlimited.  Budgets are mutable counters, so callers pass them by
 * reference; they are not meant to be shared between threads.
 */
class Budget
{
public:
    using clock = std::chrono::steady_clock;

    Budget() = default;

    static Budget cells(std::size_t max_cells)
    {
        Budget b;
        b.m_max_cells = max_cells;
        return b;
    }

    Budget& with_cells(std::size_t max_cells)
    {
        m_max_cells = max_cells;
        return *this;
    }

    Budget& with_milliseconds(long long ms)
    {
        m_has_deadline = true;
        m_deadline = clock::now() + std::chrono::milliseconds(ms);
        return *this;
    }

    void charge(std::size_t k = 1)
    {
        m_used += k;
        if (m_used > m_max_cells) {
            throw budget_exceeded("cell budget of " + std::to_string(m_max_cells) +
                                  " exceeded");
        }
        // the clock is comparatively expensive; sample it every 4096 units
        if (m_has_deadline && (m_used - m_last_clock_check) >= 4096) {
            m_last_clock_check = m_used;
            check_time();
        }
    }

    void check_time() const
    {
        if (m_has_deadline && clock::now() > m_deadline) {
            throw budget_exceeded("time budget exceeded");
        }
    }

    std::size_t used() const { return m_used; }
    std::size_t max_cells() const { return m_max_cells; }

private:
    std::size_t m_max_cells = std::numeric_limits<std::size_t>::max();
    std::size_t m_used = 0;
    std::size_t m_last_clock_check = 0;
    bool m_has_deadline = false;
    clock::time_point m_deadline{};
};

/// Shared unlimited budget for call sites that do not care.
inline Budget& unlimited_budget()
{
    thread_local Budget b;
    return b;
}

}  // namespace nabla
