#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace nabla {

using VertexId = std::uint32_t;

/**
 * A nonempty simplex given by its strictly increasing vertex list.
 *
 * Construction validates the ordering; use `Simplex::from_unsorted` when the
 * input is an arbitrary vertex collection (duplicates are then merged).
 */
class Simplex
{
public:
    Simplex() = default;

    explicit Simplex(std::vector<VertexId> vertices)
        : m_vertices(std::move(vertices))
    {
        if (m_vertices.empty()) {
            throw input_error("simplex must be nonempty");
        }
        for (std::size_t i = 1; i < m_vertices.size(); ++i) {
            if (m_vertices[i - 1] >= m_vertices[i]) {
                throw input_error("simplex vertices must be strictly increasing: " +
                                  to_string_of(m_vertices));
            }
        }
    }

    Simplex(std::initializer_list<VertexId> vertices)
        : Simplex(std::vector<VertexId>(vertices))
    {}

    static Simplex from_unsorted(std::vector<VertexId> vertices)
    {
        std::sort(vertices.begin(), vertices.end());
        vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
        return Simplex(std::move(vertices));
    }

    /// Skips validation; the caller guarantees a strictly increasing list.
    static Simplex trusted(std::vector<VertexId> vertices)
    {
        Simplex s;
        s.m_vertices = std::move(vertices);
        return s;
    }

    std::span<const VertexId> vertices() const { return m_vertices; }
    const std::vector<VertexId>& vertex_vector() const { return m_vertices; }
    std::size_t size() const { return m_vertices.size(); }
    int dim() const { return static_cast<int>(m_vertices.size()) - 1; }
    VertexId operator[](std::size_t i) const { return m_vertices[i]; }

    bool contains(VertexId v) const
    {
        return std::binary_search(m_vertices.begin(), m_vertices.end(), v);
    }

    bool is_face_of(const Simplex& other) const
    {
        return std::includes(other.m_vertices.begin(), other.m_vertices.end(),
                             m_vertices.begin(), m_vertices.end());
    }

    /// The facet obtained by deleting the i-th vertex.
    Simplex facet(std::size_t i) const
    {
        std::vector<VertexId> v;
        v.reserve(m_vertices.size() - 1);
        for (std::size_t j = 0; j < m_vertices.size(); ++j) {
            if (j != i) v.push_back(m_vertices[j]);
        }
        return trusted(std::move(v));
    }

    /// Calls `fn(face)` for every nonempty face, including the simplex itself.
    template <typename Fn>
    void for_each_face(Fn&& fn) const
    {
        const std::size_t k = m_vertices.size();
        std::vector<VertexId> buf;
        buf.reserve(k);
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
            buf.clear();
            for (std::size_t j = 0; j < k; ++j) {
                if (mask & (std::uint64_t{1} << j)) buf.push_back(m_vertices[j]);
            }
            fn(trusted(buf));
        }
    }

    /// Canonical order: by dimension, then lexicographically.
    friend bool operator<(const Simplex& a, const Simplex& b)
    {
        if (a.m_vertices.size() != b.m_vertices.size()) {
            return a.m_vertices.size() < b.m_vertices.size();
        }
        return a.m_vertices < b.m_vertices;
    }
    friend bool operator==(const Simplex& a, const Simplex& b) = default;

    std::string to_string() const { return to_string_of(m_vertices); }

private:
    static std::string to_string_of(const std::vector<VertexId>& v)
    {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(v[i]);
        }
        return s + "]";
    }

    std::vector<VertexId> m_vertices;
};

struct SimplexHash
{
    std::size_t operator()(const Simplex& s) const noexcept
    {
        std::uint64_t h = 1469598103934665603ull;
        for (VertexId v : s.vertices()) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace nabla
