#include <gtest/gtest.h>

#include <random>
#include <set>

#include "nabla/collapse.hpp"
#include "nabla/generators.hpp"
#include "nabla/homology.hpp"
#include "oracles/oracles.hpp"

using namespace nabla;

namespace {

std::vector<std::string> labels(const SimplicialComplex& k)
{
    std::vector<std::string> out;
    for (const auto& s : k.simplexes()) out.push_back(s.to_string());
    return out;
}

std::vector<std::pair<Simplex, Simplex>> hat_pairs(const Resolution& r, const SimplicialComplex* rel = nullptr)
{
    std::vector<std::pair<Simplex, Simplex>> out;
    collapse_hat_stream(r, rel, [&](const Simplex& f, const Simplex& c) { out.emplace_back(f, c); });
    return out;
}

}  // namespace

TEST(CollapseQ, EdgeExample)
{
    const auto seq = collapse_Q(0, 1, 0);
    ASSERT_EQ(seq.steps.size(), 1u);
    EXPECT_EQ(seq.steps[0].free_face, "{1}");
    EXPECT_EQ(seq.steps[0].cofacet, "{0,1}");
    const auto h = HasseComplex::of(enumerate_cells(0, 1, Flavor::Q));
    const auto rep = validate_sequence(h, seq);
    EXPECT_TRUE(finishes_at(h, rep, {"{0}"}));

    std::vector<char> keep(h.size(), 0);
    keep[h.id("{0}")] = 1;
    const auto search = greedy_oracle(h, keep, 1000);
    ASSERT_EQ(search.status, OracleStatus::found);
    EXPECT_EQ(search.sequence->steps, seq.steps);
}

TEST(CollapseQ, DiagonalIsEmpty)
{
    for (int m = 0; m <= 4; ++m) {
        const auto seq = collapse_Q(m, m, m);
        EXPECT_TRUE(seq.steps.empty());
        EXPECT_EQ(seq.start, seq.finish);
    }
}

TEST(CollapseQ, RelativeFloorEndsAtSubcomplex)
{
    const auto seq = collapse_Q(1, 3, 2);
    EXPECT_EQ(seq.finish, "Q(1,2)");
    const auto q = enumerate_cells(1, 3, Flavor::Q);
    const auto h = HasseComplex::of(q);
    const auto rep = validate_sequence(h, seq);
    std::vector<std::string> want;
    for (const auto& c : enumerate_cells(1, 2, Flavor::Q).cells) want.push_back(c.to_string());
    EXPECT_TRUE(finishes_at(h, rep, want));
    EXPECT_TRUE(cell_homology_Q(1, 2).is_point());
}

TEST(CollapseQ, PairingIsComplete)
{
    for (int n = 1; n <= 5; ++n) {
        for (int m = 0; m < n; ++m) {
            for (int floor = m; floor <= n; ++floor) {
                const auto seq = collapse_Q(m, n, floor);
                std::multiset<std::string> seen;
                for (const auto& s : seq.steps) {
                    seen.insert(s.free_face);
                    seen.insert(s.cofacet);
                }
                for (const auto& c : enumerate_cells(m, floor, Flavor::Q).cells) seen.insert(c.to_string());
                std::multiset<std::string> all;
                for (const auto& c : enumerate_cells(m, n, Flavor::Q).cells) all.insert(c.to_string());
                EXPECT_EQ(seen, all) << m << "," << n << "," << floor;
            }
        }
    }
}

TEST(CollapseQ, EulerCharacteristicTracedPerStep)
{
    const auto h = HasseComplex::of(enumerate_cells(2, 5, Flavor::Q));
    const auto rep = validate_sequence(h, collapse_Q(2, 5, 2));
    ASSERT_TRUE(rep.ok);
    EXPECT_EQ(rep.euler.size(), rep.steps_replayed + 1);
    for (long long chi : rep.euler) EXPECT_EQ(chi, 1);
}

TEST(CollapseQ, RejectsBadParameters)
{
    EXPECT_THROW(collapse_Q(3, 2, 3), parameter_error);
    EXPECT_THROW(collapse_Q(1, 3, 0), parameter_error);
    EXPECT_THROW(collapse_Q(1, 3, 4), parameter_error);
}

TEST(CollapseQOnto, EveryVertexTarget)
{
    for (int n = 1; n <= 4; ++n) {
        for (int m = 0; m <= n; ++m) {
            const auto q = enumerate_cells(m, n, Flavor::Q);
            const auto h = HasseComplex::of(q);
            for (const auto& target : q.cells) {
                if (target.dim() != 0) continue;
                CollapseSequence seq;
                for (const auto& [f, c] : collapse_Q_onto(m, n, target)) seq.steps.push_back({f.to_string(), c.to_string()});
                const auto rep = validate_sequence(h, seq);
                EXPECT_TRUE(finishes_at(h, rep, {target.to_string()})) << target.to_string() << " " << rep.message;
            }
        }
    }
}

TEST(Validate, EmptySequenceKeepsEverything)
{
    const auto h = HasseComplex::of(enumerate_cells(1, 2, Flavor::Q));
    const auto rep = validate_sequence(h, CollapseSequence{"Q(1,2)", "Q(1,2)", {}});
    EXPECT_TRUE(rep.ok);
    EXPECT_EQ(rep.remaining.size(), h.size());
}

TEST(Validate, SwappingDependentStepsFailsAtTheEarlierOne)
{
    const auto seq = collapse_Q(1, 3, 1);
    const auto h = HasseComplex::of(enumerate_cells(1, 3, Flavor::Q));
    ASSERT_TRUE(validate_sequence(h, seq).ok);
    // find the first step i whose successor i+1 depends on it
    bool found = false;
    for (std::size_t i = 0; i + 1 < seq.steps.size() && !found; ++i) {
        auto mutated = seq;
        std::swap(mutated.steps[i], mutated.steps[i + 1]);
        const auto rep = validate_sequence(h, mutated);
        if (!rep.ok) {
            found = true;
            EXPECT_EQ(*rep.failed_step, i);
        }
    }
    EXPECT_TRUE(found);
}

TEST(Validate, DanglingLabelIsAnInputError)
{
    const auto h = HasseComplex::of(enumerate_cells(0, 1, Flavor::Q));
    EXPECT_THROW(validate_sequence(h, CollapseSequence{"", "", {{"{7}", "{0,1}"}}}), input_error);
}

TEST(Validate, RejectsNonFreeFaces)
{
    const auto k = full_simplex(2);
    const auto h = HasseComplex::of(k);
    EXPECT_FALSE(validate_sequence(h, CollapseSequence{"", "", {{"[0]", "[0,1]"}}}).ok);       // [0,1] not maximal
    EXPECT_FALSE(validate_sequence(h, CollapseSequence{"", "", {{"[0]", "[0,1,2]"}}}).ok);     // not a facet
    EXPECT_TRUE(validate_sequence(h, CollapseSequence{"", "", {{"[0,1]", "[0,1,2]"}}}).ok);
}

TEST(CollapseHat, PointAtHeightTwo)
{
    const auto r = resolve(full_simplex(0), 2);
    const auto seq = collapse_hat(r);
    EXPECT_EQ(seq.steps.size(), 3u);
    const auto h = HasseComplex::of(*r.hat);
    const auto rep = validate_sequence(h, seq);
    EXPECT_TRUE(finishes_at(h, rep, {"[0]"}));

    std::vector<char> keep(h.size(), 0);
    keep[h.id("[0]")] = 1;
    EXPECT_EQ(greedy_oracle(h, keep, 10000).status, OracleStatus::found);
}

TEST(CollapseHat, EdgeAtHeightOne)
{
    const auto r = resolve(full_simplex(1), 1);
    const auto seq = collapse_hat(r);
    const auto h = HasseComplex::of(*r.hat);
    const auto rep = validate_sequence(h, seq);
    const auto e = r.embed_image();
    EXPECT_TRUE(finishes_at(h, rep, labels(e)));
    // three half-edges, each removed with its free end
    EXPECT_EQ(seq.steps.size(), 3u);
    EXPECT_EQ(r.hat->count(1), e.count(1) + 3);
}

TEST(CollapseHat, HollowTriangleRelativeToAnEdge)
{
    const auto k = sphere_boundary(1);
    const auto m = full_simplex(1);
    const auto r = resolve(k, 2);
    EXPECT_THROW(collapse_hat(resolve(k, 1), &m), parameter_error);
    const auto seq = collapse_hat(r, &m);
    EXPECT_EQ(seq.finish, "hat(M,n-1)+e");
    const auto h = HasseComplex::of(*r.hat);
    const auto rep = validate_sequence(h, seq);
    const auto target = hat_collapse_target(r, &m);
    EXPECT_TRUE(finishes_at(h, rep, labels(target))) << rep.message;
    // the target contains hat(M, 1), which is not inside e(K♭)
    const auto idx = [&](const Simplex& s) { return static_cast<std::size_t>(*k.index_of(s)); };
    const Simplex half({r.vertex_id(idx(Simplex({0})), 0), r.vertex_id(idx(Simplex({0})), 1)});
    EXPECT_TRUE(target.contains(half));
    EXPECT_FALSE(r.embed_image().contains(half));
    EXPECT_FALSE(target.contains(Simplex({r.vertex_id(idx(Simplex({0, 2})), 0), r.vertex_id(idx(Simplex({0, 2})), 1)})));
    EXPECT_EQ(homology(target), homology(*r.hat));
}

TEST(CollapseHat, RelativeRejectsHighDimensionalM)
{
    const auto k = full_simplex(2);
    const auto r = resolve(k, 2);
    EXPECT_THROW(collapse_hat(r, &k), parameter_error);
    const auto other = make_complex({{7, 8}});
    EXPECT_THROW(collapse_hat(r, &other), parameter_error);
}

TEST(CollapseHat, AgreesWithNaiveReplay)
{
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 15; ++trial) {
        const auto k = gen::random_complex(rng, 5, 2, 3);
        const int n = std::max(0, k.dim()) + trial % 2;
        const auto r = resolve(k, n);
        std::set<Simplex> alive(r.hat->simplexes().begin(), r.hat->simplexes().end());
        EXPECT_EQ(oracle::naive_replay(alive, hat_pairs(r)), -1);
        const auto e = r.embed_image();
        EXPECT_EQ(alive, std::set<Simplex>(e.simplexes().begin(), e.simplexes().end()));
    }
}

TEST(CollapseHat, RelativeRandomAgreesWithNaiveReplay)
{
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 15; ++trial) {
        const auto k = gen::random_complex_of_dim(rng, 6, 2);
        const auto m = skeleton(gen::random_subcomplex(rng, k), 1);
        const auto r = resolve(k, 2);
        std::set<Simplex> alive(r.hat->simplexes().begin(), r.hat->simplexes().end());
        EXPECT_EQ(oracle::naive_replay(alive, hat_pairs(r, &m)), -1);
        const auto t = hat_collapse_target(r, &m);
        EXPECT_EQ(alive, std::set<Simplex>(t.simplexes().begin(), t.simplexes().end()));
    }
}

TEST(CollapseHat, LocalityOnSubcomplexes)
{
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        const auto k = gen::random_complex_of_dim(rng, 6, 2);
        const auto l = gen::random_subcomplex(rng, k);
        const auto rk = resolve(k, 2), rl = resolve(l, 2);
        std::vector<std::pair<Simplex, Simplex>> sub;
        auto over_l = [&](const Simplex& s) {
            std::vector<VertexId> v;
            for (VertexId id : s.vertices()) {
                const auto rv = rk.vertex(id);
                const auto i = l.index_of(k.simplex(rv.base));
                if (!i) return std::optional<Simplex>{};
                v.push_back(rl.vertex_id(*i, rv.level));
            }
            return std::optional<Simplex>{Simplex::from_unsorted(v)};
        };
        for (const auto& [f, c] : hat_pairs(rk)) {
            if (auto c2 = over_l(c)) sub.emplace_back(*over_l(f), *c2);
        }
        std::set<Simplex> alive(rl.hat->simplexes().begin(), rl.hat->simplexes().end());
        EXPECT_EQ(oracle::naive_replay(alive, sub), -1);
        const auto e = rl.embed_image();
        EXPECT_EQ(alive, std::set<Simplex>(e.simplexes().begin(), e.simplexes().end()));
    }
}

TEST(CollapseHat, HomologyOfStartAndFinishAgree)
{
    const std::vector<SimplicialComplex> ks{sphere_boundary(2), gen::projective_plane(), make_complex({{0, 1}, {2, 3}})};
    for (const auto& k : ks) {
        const auto r = resolve(k, k.dim());
        EXPECT_EQ(homology(*r.hat), homology(r.embed_image()));
    }
}

TEST(Oracle, DunceHatIsStuck)
{
    const auto k = gen::dunce_hat();
    EXPECT_TRUE(homology(k).is_point());
    const auto h = HasseComplex::of(k);
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h.dims[i] == 1) { EXPECT_GE(h.cofacets[i].size(), 2u) << h.labels[i]; }
    }
    std::vector<char> keep(h.size(), 0);
    keep[h.id("[1]")] = 1;
    EXPECT_EQ(greedy_oracle(h, keep, 100000).status, OracleStatus::exhausted);
}

TEST(Oracle, ConesCollapseToTheirApex)
{
    // cone over a hollow square with apex 9
    const auto k = make_complex({{0, 1, 9}, {1, 2, 9}, {2, 3, 9}, {0, 3, 9}});
    const auto h = HasseComplex::of(k);
    std::vector<char> keep(h.size(), 0);
    keep[h.id("[9]")] = 1;
    const auto res = greedy_oracle(h, keep, 100000);
    ASSERT_EQ(res.status, OracleStatus::found);
    EXPECT_TRUE(finishes_at(h, validate_sequence(h, *res.sequence), {"[9]"}));
}

TEST(Oracle, BudgetIsReported)
{
    const auto h = HasseComplex::of(enumerate_cells(1, 3, Flavor::Q));
    std::vector<char> keep(h.size(), 0);
    keep[h.id(terminal_cell(1, 3).to_string())] = 1;
    EXPECT_EQ(greedy_oracle(h, keep, 2).status, OracleStatus::budget_exhausted);
}

TEST(Budget, CollapseHonoursCellBudget)
{
    auto b = Budget::cells(100);
    EXPECT_THROW(collapse_Q(2, 6, 2, b), budget_exceeded);
}
