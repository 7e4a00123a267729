#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "collapse.hpp"
#include "complex.hpp"
#include "resolution.hpp"
#include "simplicial_map.hpp"
#include "towers.hpp"

// Line-oriented text formats.  Blank lines and lines starting with '#' are
// ignored everywhere.
//
//   complex      simplex <v0> <v1> ...          (strictly increasing ids)
//   map          source: <path>
//                target: <path>
//                map <v> -> <w>
//   tower        levels: <k>
//                level <i> ... end              (complex lines, i = 0..k-1)
//                bond <i> ... end               (map lines, p_i: K_{i+1} -> K_i)
//   family       levels: <k>
//                level <i> ... end
//   certificate  collapse start=<id> finish=<id>
//                step <free-face> < <cofacet>

namespace nabla::io {

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Reads the next meaningful line; false at end of input.
inline bool next_line(std::istream& in, std::string& line, std::size_t& lineno)
{
    std::string raw;
    while (std::getline(in, raw)) {
        ++lineno;
        line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        return true;
    }
    return false;
}

inline std::string where(std::size_t lineno) { return "line " + std::to_string(lineno) + ": "; }

inline VertexId parse_vertex(const std::string& tok, std::size_t lineno)
{
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
        throw input_error(where(lineno) + "expected a non-negative integer, got '" + tok + "'");
    }
    unsigned long long v = 0;
    try {
        v = std::stoull(tok);
    } catch (const std::exception&) {
        throw input_error(where(lineno) + "vertex id out of range: " + tok);
    }
    if (v > 0xffffffffull) throw input_error(where(lineno) + "vertex id out of range: " + tok);
    return static_cast<VertexId>(v);
}

inline Simplex parse_simplex_line(const std::string& line, std::size_t lineno)
{
    std::istringstream ss(line);
    std::string kw, tok;
    ss >> kw;
    if (kw != "simplex") throw input_error(where(lineno) + "expected 'simplex', got '" + kw + "'");
    std::vector<VertexId> v;
    while (ss >> tok) v.push_back(parse_vertex(tok, lineno));
    if (v.empty()) throw input_error(where(lineno) + "empty simplex");
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i - 1] == v[i]) throw input_error(where(lineno) + "duplicate vertex " + std::to_string(v[i]));
        if (v[i - 1] > v[i]) throw input_error(where(lineno) + "vertices are not sorted");
    }
    return Simplex(std::move(v));
}

inline std::pair<VertexId, VertexId> parse_map_line(const std::string& line, std::size_t lineno)
{
    std::istringstream ss(line);
    std::string kw, from, arrow, to, extra;
    ss >> kw >> from >> arrow >> to;
    if (kw != "map" || arrow != "->" || to.empty() || (ss >> extra)) {
        throw input_error(where(lineno) + "expected 'map <v> -> <w>'");
    }
    return {parse_vertex(from, lineno), parse_vertex(to, lineno)};
}

// Reads complex lines until `end` (when in a block) or end of input.
inline SimplicialComplex read_complex_block(std::istream& in, std::size_t& lineno, bool block)
{
    std::vector<Simplex> gens;
    std::string line;
    while (next_line(in, line, lineno)) {
        if (block && line == "end") return SimplicialComplex::closure_of(gens);
        gens.push_back(parse_simplex_line(line, lineno));
    }
    if (block) throw input_error("unterminated level block");
    return SimplicialComplex::closure_of(gens);
}

inline std::map<VertexId, VertexId> read_map_block(std::istream& in, std::size_t& lineno)
{
    std::map<VertexId, VertexId> a;
    std::string line;
    while (next_line(in, line, lineno)) {
        if (line == "end") return a;
        auto [v, w] = parse_map_line(line, lineno);
        if (!a.emplace(v, w).second) throw input_error(where(lineno) + "vertex " + std::to_string(v) + " mapped twice");
    }
    throw input_error("unterminated bond block");
}

inline int parse_levels_header(std::istream& in, std::size_t& lineno)
{
    std::string line;
    if (!next_line(in, line, lineno) || line.rfind("levels:", 0) != 0) {
        throw input_error(where(lineno) + "expected 'levels: <k>'");
    }
    const std::string count = trim(line.substr(7));
    const int k = static_cast<int>(parse_vertex(count, lineno));
    if (k < 1) throw input_error(where(lineno) + "need at least one level");
    return k;
}

inline void expect_block_header(std::istream& in, std::size_t& lineno, const std::string& kw, int index)
{
    std::string line;
    const std::string want = kw + " " + std::to_string(index);
    if (!next_line(in, line, lineno) || line != want) {
        throw input_error(where(lineno) + "expected '" + want + "'");
    }
}

}  // namespace detail

inline std::string read_text_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) throw input_error("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline SimplicialComplex read_complex(std::istream& in)
{
    std::size_t lineno = 0;
    return detail::read_complex_block(in, lineno, false);
}

inline SimplicialComplex read_complex_file(const std::filesystem::path& p)
{
    std::istringstream in(read_text_file(p));
    return read_complex(in);
}

/// Writes the maximal simplexes (or all simplexes) in canonical order.
inline void write_complex(std::ostream& out, const SimplicialComplex& k, bool all_simplexes = false,
                          const std::function<std::string(VertexId)>& vertex_label = {})
{
    out << "# vertices=" << k.vertex_count() << " simplexes=" << k.size() << " dim=" << k.dim() << '\n';
    if (vertex_label) {
        for (VertexId v : k.vertices()) out << "# vertex " << v << " = " << vertex_label(v) << '\n';
    }
    const auto list = all_simplexes ? k.simplexes() : k.maximal_simplexes();
    for (const Simplex& s : list) {
        out << "simplex";
        for (VertexId v : s.vertices()) out << ' ' << v;
        out << '\n';
    }
}

inline std::string complex_to_string(const SimplicialComplex& k, bool all_simplexes = false)
{
    std::ostringstream ss;
    write_complex(ss, k, all_simplexes);
    return ss.str();
}

/// Reads a map file; `source:`/`target:` paths are relative to the map file's directory.
inline SimplicialMap read_map_file(const std::filesystem::path& p)
{
    std::istringstream in(read_text_file(p));
    std::size_t lineno = 0;
    std::string line, source, target;
    std::map<VertexId, VertexId> a;
    while (detail::next_line(in, line, lineno)) {
        if (line.rfind("source:", 0) == 0) {
            source = detail::trim(line.substr(7));
        } else if (line.rfind("target:", 0) == 0) {
            target = detail::trim(line.substr(7));
        } else {
            auto [v, w] = detail::parse_map_line(line, lineno);
            if (!a.emplace(v, w).second) {
                throw input_error(detail::where(lineno) + "vertex " + std::to_string(v) + " mapped twice");
            }
        }
    }
    if (source.empty() || target.empty()) throw input_error("map file needs 'source:' and 'target:' lines");
    const auto dir = p.parent_path();
    return SimplicialMap(share(read_complex_file(dir / source)), share(read_complex_file(dir / target)),
                         std::move(a));
}

inline void write_map_body(std::ostream& out, const SimplicialMap& f)
{
    for (const auto& [v, w] : f.assignment()) out << "map " << v << " -> " << w << '\n';
}

inline void write_map(std::ostream& out, const SimplicialMap& f, const std::string& source_path,
                      const std::string& target_path)
{
    out << "source: " << source_path << '\n' << "target: " << target_path << '\n';
    write_map_body(out, f);
}

inline Tower read_tower(std::istream& in)
{
    std::size_t lineno = 0;
    const int k = detail::parse_levels_header(in, lineno);
    Tower t;
    for (int i = 0; i < k; ++i) {
        detail::expect_block_header(in, lineno, "level", i);
        t.levels.push_back(share(detail::read_complex_block(in, lineno, true)));
    }
    for (int i = 0; i + 1 < k; ++i) {
        detail::expect_block_header(in, lineno, "bond", i);
        t.bonds.emplace_back(t.levels[i + 1], t.levels[i], detail::read_map_block(in, lineno));
    }
    std::string line;
    if (detail::next_line(in, line, lineno)) throw input_error(detail::where(lineno) + "trailing content");
    t.validate();
    return t;
}

inline Tower read_tower_file(const std::filesystem::path& p)
{
    std::istringstream in(read_text_file(p));
    return read_tower(in);
}

inline void write_tower(std::ostream& out, const Tower& t)
{
    out << "levels: " << t.size() << '\n';
    for (std::size_t i = 0; i < t.size(); ++i) {
        out << "level " << i << '\n';
        write_complex(out, *t.levels[i]);
        out << "end\n";
    }
    for (std::size_t i = 0; i < t.bonds.size(); ++i) {
        out << "bond " << i << '\n';
        write_map_body(out, t.bonds[i]);
        out << "end\n";
    }
}

inline SubcomplexFamily read_family(std::istream& in)
{
    std::size_t lineno = 0;
    const int k = detail::parse_levels_header(in, lineno);
    SubcomplexFamily f;
    for (int i = 0; i < k; ++i) {
        detail::expect_block_header(in, lineno, "level", i);
        f.members.push_back(detail::read_complex_block(in, lineno, true));
    }
    return f;
}

inline SubcomplexFamily read_family_file(const std::filesystem::path& p)
{
    std::istringstream in(read_text_file(p));
    return read_family(in);
}

inline void write_family(std::ostream& out, const SubcomplexFamily& f)
{
    out << "levels: " << f.members.size() << '\n';
    for (std::size_t i = 0; i < f.members.size(); ++i) {
        out << "level " << i << '\n';
        write_complex(out, f.members[i]);
        out << "end\n";
    }
}

// ---------------------------------------------------------------------------
// certificates

inline void write_certificate_header(std::ostream& out, const std::string& start, const std::string& finish)
{
    out << "collapse start=" << start << " finish=" << finish << '\n';
}

inline void write_certificate_step(std::ostream& out, const std::string& free_face, const std::string& cofacet)
{
    out << "step " << free_face << " < " << cofacet << '\n';
}

inline void write_certificate(std::ostream& out, const CollapseSequence& seq)
{
    write_certificate_header(out, seq.start, seq.finish);
    for (const auto& s : seq.steps) write_certificate_step(out, s.free_face, s.cofacet);
}

/**
 * Streams a certificate: the header is returned through `start`/`finish`,
 * every step goes to `on_step`, which may return false to stop early.
 */
inline void read_certificate(std::istream& in, std::string& start, std::string& finish,
                             const std::function<bool(const std::string&, const std::string&)>& on_step)
{
    std::size_t lineno = 0;
    std::string line;
    if (!detail::next_line(in, line, lineno)) throw input_error("empty certificate");
    {
        std::istringstream ss(line);
        std::string kw, a, b;
        ss >> kw >> a >> b;
        if (kw != "collapse" || a.rfind("start=", 0) != 0 || b.rfind("finish=", 0) != 0) {
            throw input_error(detail::where(lineno) + "expected 'collapse start=<id> finish=<id>'");
        }
        start = a.substr(6);
        finish = b.substr(7);
    }
    while (detail::next_line(in, line, lineno)) {
        std::istringstream ss(line);
        std::string kw, f, lt, c, extra;
        ss >> kw >> f >> lt >> c;
        if (kw != "step" || lt != "<" || c.empty() || (ss >> extra)) {
            throw input_error(detail::where(lineno) + "expected 'step <free-face> < <cofacet>'");
        }
        if (!on_step(f, c)) return;
    }
}

inline CollapseSequence read_certificate(std::istream& in)
{
    CollapseSequence seq;
    read_certificate(in, seq.start, seq.finish, [&](const std::string& f, const std::string& c) {
        seq.steps.push_back({f, c});
        return true;
    });
    return seq;
}

/// 64-bit FNV-1a digest, printed as 16 hex digits.
inline std::string digest(const std::string& bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

/// Writes to a sibling temporary file and renames it over `p`.
inline void write_file_atomic(const std::filesystem::path& p, const std::string& contents)
{
    auto tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw input_error("cannot write " + tmp.string());
        out << contents;
        if (!out) throw input_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, p);
}

}  // namespace nabla::io
