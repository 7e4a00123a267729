#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "collapse.hpp"
#include "generators.hpp"
#include "homology.hpp"
#include "io.hpp"
#include "resolution.hpp"
#include "towers.hpp"

namespace nabla::selftest {

// Wall-clock limits, in seconds.
inline constexpr double grayson_listing_limit = 1.0;
inline constexpr double q_collapse_limit = 60.0;
inline constexpr double corpus_limit = 300.0;

inline constexpr std::uint64_t default_seed = 0x6e61626c61ULL;

struct Options
{
    std::uint64_t seed = default_seed;
    int corpus_vertices = 5;  // all complexes up to isomorphism on at most this many vertices
    int max_q = 5;            // 0 <= m < n <= max_q for the Q(m, n) collapses
};

struct Result
{
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    std::string artifact;  // digest of the deterministic output of the check
    double seconds = 0.0;
};

/// "criterion  4 PASS collapse-hat-corpus: <detail> [digest] (1.23 s)"
inline std::string format(const Result& r)
{
    std::ostringstream os;
    os << "criterion " << (r.id < 10 ? " " : "") << r.id << ' ' << (r.pass ? "PASS" : "FAIL") << ' ' << r.name
       << ": " << r.detail;
    if (!r.artifact.empty()) os << " [" << r.artifact << ']';
    os.setf(std::ios::fixed);
    os.precision(2);
    os << " (" << r.seconds << " s)";
    return os.str();
}

namespace detail {

class Check
{
public:
    /// Records the first failure only; later ones are usually consequences.
    void require(bool cond, const std::string& what)
    {
        if (!cond && m_ok) {
            m_ok = false;
            m_first = what;
        }
    }
    bool ok() const { return m_ok; }
    const std::string& first_failure() const { return m_first; }

private:
    bool m_ok = true;
    std::string m_first;
};

inline std::vector<std::string> labels_of(const SimplicialComplex& k)
{
    std::vector<std::string> out;
    for (const Simplex& s : k.simplexes()) out.push_back(s.to_string());
    return out;
}

inline std::vector<std::string> labels_of(const CellComplex& cx)
{
    std::vector<std::string> out;
    for (const Cell& c : cx.cells) out.push_back(c.to_string());
    return out;
}

inline std::string certificate_text(const CollapseSequence& seq)
{
    std::ostringstream os;
    io::write_certificate(os, seq);
    return os.str();
}

inline std::string finish(Check& c, Result& r, const std::string& summary, const std::string& bytes)
{
    r.pass = c.ok();
    r.detail = c.ok() ? summary : c.first_failure();
    r.artifact = io::digest(bytes);
    return r.artifact;
}

}  // namespace detail

/// Grayson cells of R(1,2) and R(1,3): top cells and their factor dimensions.
inline Result grayson_listing(const Options&)
{
    Result r{1, "grayson-cells", false, {}, {}, 0.0};
    detail::Check c;
    const auto t0 = std::chrono::steady_clock::now();
    std::string bytes;
    const std::vector<std::vector<std::vector<int>>> expected{
        {{0, 2}, {1, 1}, {2, 0}},
        {{0, 3}, {1, 2}, {2, 1}, {3, 0}},
    };
    for (int n = 2; n <= 3; ++n) {
        const CellComplex cx = enumerate_cells(1, n, Flavor::R);
        bytes += format_cell_listing(cx);
        std::vector<std::vector<int>> top;
        for (const Cell& cell : cx.cells) {
            if (cell.dim() == n) top.push_back(cell.factor_dims());
        }
        std::sort(top.begin(), top.end());
        auto want = expected[n - 2];
        std::sort(want.begin(), want.end());
        c.require(cx.dim() == n, "R(1," + std::to_string(n) + ") has dimension " + std::to_string(cx.dim()));
        c.require(top == want, "R(1," + std::to_string(n) + ") top cells have unexpected factor dimensions");
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(r.seconds < grayson_listing_limit, "listing took longer than the limit");
    detail::finish(c, r, "R(1,2) top factors (0,2),(1,1),(2,0); R(1,3) top factors (0,3)..(3,0)", bytes);
    return r;
}

/// collapse_Q(m, n, m) for 0 <= m < n <= max_q.
inline Result q_collapses(const Options& opt)
{
    Result r{2, "collapse-q-terminal", false, {}, {}, 0.0};
    detail::Check c;
    const auto t0 = std::chrono::steady_clock::now();
    std::string bytes;
    int cases = 0;
    std::size_t steps = 0;
    for (int n = 1; n <= opt.max_q; ++n) {
        for (int m = 0; m < n; ++m) {
            const std::string tag = "Q(" + std::to_string(m) + "," + std::to_string(n) + ")";
            const CellComplex q = enumerate_cells(m, n, Flavor::Q);
            const HasseComplex h = HasseComplex::of(q);
            const CollapseSequence seq = collapse_Q(m, n, m);
            const ValidationReport rep = validate_sequence(h, seq);
            c.require(rep.ok, tag + ": " + rep.message);
            c.require(finishes_at(h, rep, {terminal_cell(m, n).to_string()}),
                      tag + ": collapse does not end at the terminal cell");
            c.require(seq.steps.size() * 2 + 1 == q.cells.size(), tag + ": pairing does not cover every cell");
            c.require(cell_homology_Q(m, n).is_point(), tag + ": homology is not that of a point");
            bytes += detail::certificate_text(seq);
            steps += seq.steps.size();
            ++cases;
        }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(r.seconds < q_collapse_limit, "collapses took longer than the limit");
    detail::finish(c, r, std::to_string(cases) + " cases, " + std::to_string(steps) + " steps", bytes);
    return r;
}

/// Relative collapses Q(m, n) onto Q(m, floor) for every floor in [m, n-1].
inline Result q_relative(const Options& opt)
{
    Result r{3, "collapse-q-relative", false, {}, {}, 0.0};
    detail::Check c;
    const auto t0 = std::chrono::steady_clock::now();
    std::string bytes;
    int cases = 0;
    for (int n = 1; n <= opt.max_q; ++n) {
        for (int m = 0; m < n; ++m) {
            const HasseComplex h = HasseComplex::of(enumerate_cells(m, n, Flavor::Q));
            for (int floor = m; floor < n; ++floor) {
                const std::string tag = "Q(" + std::to_string(m) + "," + std::to_string(n) + ") onto Q(" +
                                        std::to_string(m) + "," + std::to_string(floor) + ")";
                const CollapseSequence seq = collapse_Q(m, n, floor);
                const ValidationReport rep = validate_sequence(h, seq);
                c.require(rep.ok, tag + ": " + rep.message);
                c.require(finishes_at(h, rep, detail::labels_of(enumerate_cells(m, floor, Flavor::Q))),
                          tag + ": remaining cells differ from the subcomplex");
                bytes += detail::certificate_text(seq);
                ++cases;
            }
        }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail::finish(c, r, std::to_string(cases) + " (m, n, floor) cases", bytes);
    return r;
}

/// Complexes for the hat-collapse check: every isomorphism class on few vertices plus named extras.
inline std::vector<std::pair<std::string, SimplicialComplex>> collapse_corpus(const Options& opt)
{
    std::vector<std::pair<std::string, SimplicialComplex>> out;
    int i = 0;
    for (auto& k : gen::complexes_up_to_iso(opt.corpus_vertices)) out.emplace_back("iso#" + std::to_string(i++), k);
    out.emplace_back("hollow-triangle", sphere_boundary(1));
    out.emplace_back("boundary-tetrahedron", sphere_boundary(2));
    std::mt19937_64 rng(opt.seed ^ 0x4c4f43ULL);
    out.emplace_back("random-8v-a", gen::random_complex_of_dim(rng, 8, 3));
    out.emplace_back("random-8v-b", gen::random_complex_of_dim(rng, 8, 3));
    return out;
}

/**
 * collapse_hat(K, dim K) on the corpus, plus locality: the certificate
 * restricted to the simplexes over a random subcomplex L is a collapse of
 * L̂ⁿ onto e(L♭).
 */
inline Result hat_corpus(const Options& opt)
{
    Result r{4, "collapse-hat-corpus", false, {}, {}, 0.0};
    detail::Check c;
    const auto t0 = std::chrono::steady_clock::now();
    std::string bytes;
    const auto corpus = collapse_corpus(opt);
    std::mt19937_64 rng(opt.seed ^ 0x53554243ULL);
    std::size_t total_steps = 0, restricted_steps = 0;
    for (const auto& [name, k] : corpus) {
        const int n = std::max(0, k.dim());
        const Resolution rk = resolve(k, n);
        std::vector<std::pair<Simplex, Simplex>> pairs;
        collapse_hat_stream(rk, nullptr, [&](const Simplex& f, const Simplex& g) { pairs.emplace_back(f, g); });
        CollapseSequence seq{hat_descriptor(n), "e", {}};
        for (const auto& [f, g] : pairs) seq.steps.push_back({f.to_string(), g.to_string()});
        const HasseComplex h = HasseComplex::of(*rk.hat);
        const ValidationReport rep = validate_sequence(h, seq);
        c.require(rep.ok, name + ": " + rep.message);
        c.require(finishes_at(h, rep, detail::labels_of(rk.embed_image())), name + ": does not end at e(K♭)");
        bytes += name + "\n" + detail::certificate_text(seq);
        total_steps += seq.steps.size();

        const SimplicialComplex l = gen::random_subcomplex(rng, k);
        const Resolution rl = resolve(l, n);
        auto relabel = [&](const Simplex& s) -> std::optional<Simplex> {
            std::vector<VertexId> v;
            for (VertexId id : s.vertices()) {
                const auto rv = rk.vertex(id);
                const auto idx = l.index_of(k.simplex(rv.base));
                if (!idx) return std::nullopt;
                v.push_back(rl.vertex_id(*idx, rv.level));
            }
            return Simplex::from_unsorted(v);
        };
        CollapseSequence sub{hat_descriptor(n), "e", {}};
        for (const auto& [f, g] : pairs) {
            const auto g2 = relabel(g);
            if (!g2) continue;
            sub.steps.push_back({relabel(f)->to_string(), g2->to_string()});
        }
        const HasseComplex hl = HasseComplex::of(*rl.hat);
        const ValidationReport rl_rep = validate_sequence(hl, sub);
        c.require(rl_rep.ok, name + " restricted to " + io::complex_to_string(l) + ": " + rl_rep.message);
        c.require(finishes_at(hl, rl_rep, detail::labels_of(rl.embed_image())),
                  name + ": restricted certificate does not end at e(L♭)");
        bytes += "sub\n" + detail::certificate_text(sub);
        restricted_steps += sub.steps.size();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(corpus.size() >= 30, "corpus has fewer than 30 complexes");
    c.require(r.seconds < corpus_limit, "corpus took longer than the limit");
    detail::finish(c, r,
                   std::to_string(corpus.size()) + " complexes, " + std::to_string(total_steps) + " steps, " +
                       std::to_string(restricted_steps) + " restricted steps",
                   bytes);
    return r;
}

/// For 1-dimensional K: #edges of K̂¹ = #edges of e(K♭) + #vertices of K♭.
inline Result half_edges(const Options& opt)
{
    Result r{5, "half-edge-count", false, {}, {}, 0.0};
    detail::Check c;
    const auto t0 = std::chrono::steady_clock::now();
    std::string bytes;
    std::vector<SimplicialComplex> graphs;
    for (auto& [name, k] : collapse_corpus(opt)) {
        if (k.dim() == 1) graphs.push_back(k);
    }
    std::mt19937_64 rng(opt.seed ^ 0x48414c46ULL);
    for (int i = 0; i < 20; ++i) graphs.push_back(gen::random_complex_of_dim(rng, 8, 1, 10));
    for (const auto& k : graphs) {
        const Resolution res = resolve(k, 1);
        const std::size_t hat_edges = res.hat->count(1);
        const std::size_t e_edges = res.embed_image().count(1);
        const std::size_t flat_vertices = res.flat->count(0);
        c.require(hat_edges == e_edges + flat_vertices,
                  io::complex_to_string(k) + ": " + std::to_string(hat_edges) + " != " +
                      std::to_string(e_edges) + " + " + std::to_string(flat_vertices));
        bytes += std::to_string(hat_edges) + "," + std::to_string(e_edges) + "," + std::to_string(flat_vertices) + ";";
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail::finish(c, r, std::to_string(graphs.size()) + " graphs", bytes);
    return r;
}

/// H(K̂ⁿ) = H(K) = H(K♭) on random complexes.
inline Result homology_preserved(const Options& opt)
{
    Result r{6, "homology-preserved", false, {}, {}, 0.0};
    detail::Check c;
    const auto t0 = std::chrono::steady_clock::now();
    std::string bytes;
    std::mt19937_64 rng(opt.seed ^ 0x484f4dULL);
    const int count = 50;
    for (int i = 0; i < count; ++i) {
        const int vertices = 1 + static_cast<int>(gen::below(rng, 8));
        const SimplicialComplex k = gen::random_complex(rng, vertices, 3);
        const int n = std::max(0, k.dim());
        const Resolution res = resolve(k, n);
        const HomologyProfile hk = homology(k);
        const HomologyProfile hb = homology(*res.flat);
        const HomologyProfile hh = homology(*res.hat);
        c.require(hk == hb && hk == hh, "homology differs for " + io::complex_to_string(k));
        bytes += hk.to_string() + "|";
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail::finish(c, r, std::to_string(count) + " random complexes", bytes);
    return r;
}

/// Lifts of random maps: non-degenerate, natural with respect to p, functorial.
inline Result lift_properties(const Options& opt)
{
    Result r{7, "lift-properties", false, {}, {}, 0.0};
    detail::Check c;
    const auto t0 = std::chrono::steady_clock::now();
    std::string bytes;
    std::mt19937_64 rng(opt.seed ^ 0x4c494654ULL);
    const int count = 100;
    int degenerate = 0, constant = 0;
    for (int i = 0; i < count; ++i) {
        const int vertices = 3 + static_cast<int>(gen::below(rng, 4));
        const ComplexPtr k = share(gen::random_complex_of_dim(rng, vertices, 1 + static_cast<int>(gen::below(rng, 2))));
        const int spread = (i % 5 == 0) ? 1 : 2 + static_cast<int>(gen::below(rng, 4));
        const SimplicialMap f = gen::random_map(rng, k, spread);
        const SimplicialMap g = gen::random_map(rng, f.target_ptr(), 1 + static_cast<int>(gen::below(rng, 4)));
        if (!is_nondegenerate(f)) ++degenerate;
        if (spread == 1) ++constant;

        const int n = std::max({k->dim(), f.target().dim(), g.target().dim(), 0});
        const Resolution rk = resolve(k, n);
        const Resolution rl = resolve(f.target_ptr(), n);
        const Resolution rm = resolve(g.target_ptr(), n);
        const SimplicialMap lf = lift(f, rk, rl);
        const SimplicialMap lg = lift(g, rl, rm);
        const std::string tag = "map #" + std::to_string(i);

        // simpliciality checked from scratch
        bool simplicial = true;
        try {
            SimplicialMap(lf.source_ptr(), lf.target_ptr(), lf.assignment());
        } catch (const input_error&) {
            simplicial = false;
        }
        c.require(simplicial, tag + ": lift is not simplicial");
        c.require(is_nondegenerate(lf), tag + ": lift is degenerate");

        const SimplicialMap fflat = induced_bary_map(f, rk.flat, rl.flat);
        c.require(compose(rl.project, lf) == compose(fflat, rk.project), tag + ": p ∘ lift differs from f♭ ∘ p");
        c.require(compose(rk.project, rk.embed) == SimplicialMap::identity(rk.flat), tag + ": p ∘ e is not the identity");
        c.require(lift(compose(g, f), rk, rm) == compose(lg, lf), tag + ": lift is not functorial");
        for (const auto& [v, w] : lf.assignment()) bytes += std::to_string(v) + ">" + std::to_string(w) + ",";
        bytes += ";";
    }
    c.require(degenerate >= 20, "only " + std::to_string(degenerate) + " degenerate maps were drawn");
    c.require(constant >= 1, "no constant maps were drawn");
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail::finish(c, r,
                   std::to_string(count) + " maps (" + std::to_string(degenerate) + " degenerate, " +
                       std::to_string(constant) + " constant)",
                   bytes);
    return r;
}

/// Resolved example towers: non-degenerate bonds, unchanged homology, decomposable skeleton families.
inline Result tower_resolution(const Options&)
{
    Result r{8, "tower-resolution", false, {}, {}, 0.0};
    detail::Check c;
    const auto t0 = std::chrono::steady_clock::now();
    std::string bytes;
    struct Case
    {
        std::string name;
        Tower tower;
        bool degenerate_before;
    };
    const std::vector<Case> cases{
        {"nested_intervals(5)", nested_intervals_tower(5), true},
        {"hawaiian(4,1)", hawaiian_tower(4, 1), true},
        {"solenoid(2,4)", solenoid_tower(4, 2, 3), false},
    };
    for (const auto& cs : cases) {
        int n = 0;
        for (const auto& lvl : cs.tower.levels) n = std::max(n, lvl->dim());
        bool any_degenerate = false;
        for (const auto& b : cs.tower.bonds) any_degenerate = any_degenerate || !is_nondegenerate(b);
        c.require(any_degenerate == cs.degenerate_before,
                  cs.name + (cs.degenerate_before ? ": expected a degenerate bond" : ": expected non-degenerate bonds"));
        const ResolvedTower rt = resolve_tower(cs.tower, n);
        for (std::size_t i = 0; i < rt.tower.bonds.size(); ++i) {
            c.require(is_nondegenerate(rt.tower.bonds[i]),
                      cs.name + ": resolved bond " + std::to_string(i) + " is degenerate");
        }
        for (std::size_t i = 0; i < cs.tower.size(); ++i) {
            const HomologyProfile before = homology(*cs.tower.levels[i]);
            const HomologyProfile after = homology(*rt.tower.levels[i]);
            c.require(before == after, cs.name + ": homology of level " + std::to_string(i) + " changed");
            bytes += after.to_string();
        }
        for (int d = 0; d <= n; ++d) {
            const FamilyCheck fc = check_family(rt.tower, skeleton_family(rt.tower, d), FamilyMode::decomposable);
            c.require(fc.ok, cs.name + ": skeleton family " + std::to_string(d) + " is not decomposable: " + fc.message);
        }
        for (const auto& lvl : rt.tower.levels) bytes += std::to_string(lvl->size()) + ",";
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail::finish(c, r, "nested_intervals(5), hawaiian(4,1), solenoid(2,4)", bytes);
    return r;
}

/// Dunce hat plus a pendant triangle glued along the edge [1,2].
inline SimplicialComplex dunce_hat_with_pendant()
{
    std::vector<Simplex> gens = gen::dunce_hat().maximal_simplexes();
    gens.push_back(Simplex{1, 2, 14});
    return SimplicialComplex::closure_of(gens);
}

/// All surjections [a] → [b] with 0 <= b <= a <= max_a.
inline void for_each_surjection(int max_a, const std::function<void(const Surjection&)>& fn)
{
    for (int a = 0; a <= max_a; ++a) {
        Surjection s(a + 1, 0);
        std::function<void(int)> rec = [&](int i) {
            if (i == a + 1) {
                const int b = *std::max_element(s.begin(), s.end());
                if (is_surjection(s, b)) fn(s);
                return;
            }
            for (int v = 0; v <= a; ++v) {
                s[i] = v;
                rec(i + 1);
            }
        };
        rec(0);
    }
}

/// Search oracle agreement, dunce hat exhaustion and surjection factorization.
inline Result oracle_checks(const Options&)
{
    Result r{9, "oracles", false, {}, {}, 0.0};
    detail::Check c;
    const auto t0 = std::chrono::steady_clock::now();
    std::string bytes;
    constexpr std::size_t node_budget = 2'000'000;

    int q_cases = 0;
    for (int n = 1; n <= 3; ++n) {
        for (int m = 0; m < n; ++m) {
            const CellComplex q = enumerate_cells(m, n, Flavor::Q);
            const HasseComplex h = HasseComplex::of(q);
            std::vector<char> keep(h.size(), 0);
            keep[h.id(terminal_cell(m, n).to_string())] = 1;
            const OracleResult res = greedy_oracle(h, keep, node_budget);
            const std::string tag = q_descriptor(m, n);
            c.require(res.status == OracleStatus::found, tag + ": search found no collapse");
            if (res.sequence) {
                const ValidationReport rep = validate_sequence(h, *res.sequence);
                c.require(finishes_at(h, rep, {terminal_cell(m, n).to_string()}), tag + ": search result invalid");
                bytes += detail::certificate_text(*res.sequence);
            }
            ++q_cases;
        }
    }

    const std::vector<std::pair<std::string, SimplicialComplex>> hats{
        {"dunce hat", gen::dunce_hat()}, {"dunce hat with pendant", dunce_hat_with_pendant()}};
    for (const auto& [name, k] : hats) {
        c.require(homology(k).is_point(), name + ": homology is not that of a point");
        const HasseComplex h = HasseComplex::of(k);
        std::vector<char> keep(h.size(), 0);
        keep[h.id(Simplex{1}.to_string())] = 1;
        const OracleResult res = greedy_oracle(h, keep, node_budget);
        c.require(res.status == OracleStatus::exhausted, name + ": search did not exhaust");
        bytes += name + ":" + std::to_string(res.nodes) + ";";
    }
    {
        const SimplicialComplex dh = gen::dunce_hat();
        const HasseComplex h = HasseComplex::of(dh);
        for (std::size_t i = 0; i < h.size(); ++i) {
            if (h.dims[i] == 1) c.require(h.cofacets[i].size() >= 2, "dunce hat edge " + h.labels[i] + " is free");
        }
    }

    std::size_t surjections = 0;
    for_each_surjection(6, [&](const Surjection& s) {
        ++surjections;
        const int a = static_cast<int>(s.size()) - 1;
        const int b = *std::max_element(s.begin(), s.end());
        const auto factors = factor_surjection(s);
        Surjection acc(s.size());
        for (int x = 0; x <= a; ++x) acc[x] = x;
        int dom = a;
        bool shapes = true;
        for (const auto& f : factors) {
            shapes = shapes && static_cast<int>(f.size()) == dom + 1;
            const int cod = f.empty() ? -1 : *std::max_element(f.begin(), f.end());
            shapes = shapes && is_surjection(f, cod) && (a == b ? cod == dom : cod == dom - 1);
            acc = compose_surjections(f, acc);
            dom = cod;
        }
        std::string text;
        for (int x : s) text += std::to_string(x);
        c.require(shapes, "factor shapes wrong for " + text);
        c.require(acc == s, "factors do not compose back to " + text);
        c.require(a == b || static_cast<int>(factors.size()) == a - b, "wrong number of factors for " + text);
    });

    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail::finish(c, r,
                   std::to_string(q_cases) + " Q(m,n) searches, dunce hats exhausted, " +
                       std::to_string(surjections) + " surjections factored",
                   bytes);
    return r;
}

inline std::vector<std::function<Result(const Options&)>> criteria()
{
    return {grayson_listing, q_collapses, q_relative, hat_corpus, half_edges,
            homology_preserved, lift_properties, tower_resolution, oracle_checks};
}

/// Runs every check; the last one reruns the others and compares artifact digests.
inline std::vector<Result> run_all(const Options& opt = {}, const std::function<void(const Result&)>& on_result = {})
{
    std::vector<Result> out;
    for (const auto& fn : criteria()) {
        Result res;
        try {
            res = fn(opt);
        } catch (const std::exception& e) {
            res.id = static_cast<int>(out.size()) + 1;
            res.name = "exception";
            res.pass = false;
            res.detail = e.what();
        }
        if (on_result) on_result(res);
        out.push_back(std::move(res));
    }

    Result det{10, "determinism", false, {}, {}, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    detail::Check c;
    std::string bytes;
    const auto fns = criteria();
    for (std::size_t i = 0; i < fns.size(); ++i) {
        std::string again;
        try {
            again = fns[i](opt).artifact;
        } catch (const std::exception& e) {
            again = std::string("exception: ") + e.what();
        }
        c.require(again == out[i].artifact, "criterion " + std::to_string(i + 1) + " output changed between runs");
        bytes += again;
    }
    det.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail::finish(c, det, "criteria 1-9 reproduce identical artifacts", bytes);
    if (on_result) on_result(det);
    out.push_back(std::move(det));
    return out;
}

}  // namespace nabla::selftest
