#include <gtest/gtest.h>

#include <gmpxx.h>

#include <random>

#include "nabla/collapse.hpp"
#include "nabla/generators.hpp"
#include "nabla/homology.hpp"
#include "oracles/oracles.hpp"

using namespace nabla;

namespace {

/// Betti numbers mod 2 predicted from the integral profile (universal coefficients).
std::vector<std::size_t> mod2_from_integral(const HomologyProfile& p)
{
    auto even = [](const DimHomology& g) {
        std::size_t c = 0;
        for (const auto& t : g.torsion) c += (mpz_class(t) % 2 == 0);
        return c;
    };
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < p.groups.size(); ++k) {
        out.push_back(p.groups[k].betti + even(p.groups[k]) + (k ? even(p.groups[k - 1]) : 0));
    }
    return out;
}

}  // namespace

TEST(Boundary, EdgeColumn)
{
    const auto bs = boundary_matrices(full_simplex(1));
    ASSERT_EQ(bs.size(), 1u);
    const auto d = bs[0].dense();
    EXPECT_EQ(d[0][0], -1);
    EXPECT_EQ(d[1][0], 1);
}

TEST(Boundary, SquaresToZero)
{
    EXPECT_TRUE(boundary_squares_to_zero(boundary_matrices(full_simplex(2))));
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        const auto k = gen::random_complex(rng, 8, 4, 5);
        EXPECT_TRUE(boundary_squares_to_zero(boundary_matrices(k)));
        EXPECT_TRUE(boundary_squares_to_zero(boundary_matrices(barycentric(k))));
    }
    EXPECT_TRUE(boundary_squares_to_zero(boundary_matrices(*resolve(full_simplex(2), 3).hat)));
}

TEST(Boundary, HollowTriangleRank)
{
    const auto bs = boundary_matrices(sphere_boundary(1));
    EXPECT_EQ(smith_summary(bs[0].rows, bs[0].columns).rank, 2u);
}

TEST(Homology, Spheres)
{
    EXPECT_EQ(homology(sphere_boundary(2)).betti(), (std::vector<std::size_t>{1, 0, 1}));
    EXPECT_EQ(homology(sphere_boundary(1)).betti(), (std::vector<std::size_t>{1, 1}));
    EXPECT_TRUE(homology(full_simplex(4)).is_point());
}

TEST(Homology, ProjectivePlane)
{
    const auto k = gen::projective_plane();
    const auto p = homology(k);
    EXPECT_EQ(p.betti(), (std::vector<std::size_t>{1, 0, 0}));
    EXPECT_EQ(p.groups[1].torsion, (std::vector<std::string>{"2"}));
    EXPECT_TRUE(p.groups[0].torsion.empty());
    EXPECT_EQ(oracle::betti_mod2(k), (std::vector<std::size_t>{1, 1, 1}));
    EXPECT_EQ(mod2_from_integral(p), oracle::betti_mod2(k));
    EXPECT_EQ(p.to_string(), "H_0: betti=1 torsion=\nH_1: betti=0 torsion=2\nH_2: betti=0 torsion=\n");
}

TEST(Homology, AgreesWithMod2OracleOnRandomComplexes)
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 40; ++trial) {
        const auto k = gen::random_complex(rng, 8, 3, 7);
        const auto p = homology(k);
        EXPECT_EQ(mod2_from_integral(p), oracle::betti_mod2(k));
        EXPECT_EQ(p.euler_from_betti(), k.euler_characteristic());
    }
}

TEST(Homology, InvariantUnderSubdivision)
{
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 30; ++trial) {
        const auto k = gen::random_complex(rng, 7, 3, 5);
        EXPECT_EQ(homology(k), homology(barycentric(k)));
    }
    EXPECT_EQ(homology(gen::projective_plane()), homology(barycentric(gen::projective_plane())));
}

TEST(Homology, GraysonComplexes)
{
    EXPECT_EQ(cell_homology_Q(0, 3).betti(), (std::vector<std::size_t>{1, 0, 0, 0}));
    EXPECT_TRUE(cell_homology_Q(1, 2).is_point());
    EXPECT_EQ(cell_homology_Q(1, 2).betti().size(), 2u);
    // R(1,2) cellulates a 2-simplex
    EXPECT_TRUE(cell_homology(enumerate_cells(1, 2, Flavor::R)).is_point());
}

TEST(Homology, TrailingTrivialGroupsIgnored)
{
    HomologyProfile a{{{1, {}}}};
    HomologyProfile b{{{1, {}}, {0, {}}, {0, {}}}};
    EXPECT_EQ(a, b);
}

TEST(Homology, BudgetIsEnforced)
{
    auto b = Budget::cells(5);
    EXPECT_THROW(homology(full_simplex(3), b), budget_exceeded);
}

TEST(Smith, PromotesToArbitraryPrecision)
{
    // diag(p, q) with coprime p, q near 2^45: invariant factors 1, pq, which overflow 64 bits
    const std::int64_t p = (std::int64_t{1} << 45) + 59;
    const std::int64_t q = (std::int64_t{1} << 45) + 15;
    ASSERT_EQ(std::gcd(p, q), 1);
    std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> cols{{{0, p}}, {{1, q}}};
    const auto s = smith_summary(2, cols);
    EXPECT_EQ(s.rank, 2u);
    EXPECT_TRUE(s.used_arbitrary_precision);
    const mpz_class pq = mpz_class(static_cast<long>(p)) * mpz_class(static_cast<long>(q));
    EXPECT_EQ(s.torsion, (std::vector<std::string>{pq.get_str()}));
}

TEST(Smith, SmallMatricesStayInMachineIntegers)
{
    std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> cols{{{0, 2}, {1, 4}}, {{0, 6}, {1, 8}}};
    const auto s = smith_summary(2, cols);
    EXPECT_EQ(s.rank, 2u);
    EXPECT_FALSE(s.used_arbitrary_precision);
    // det = -8, gcd of entries 2: factors 2, 4
    EXPECT_EQ(s.torsion, (std::vector<std::string>{"2", "4"}));
}

TEST(Homology, CollapseCertificatesKeepHomology)
{
    const auto k = make_complex({{0, 1, 2}, {2, 3}, {3, 4}, {2, 4}});
    const auto r = resolve(k, 2);
    const auto m = make_complex({{2, 3}, {3, 4}, {2, 4}});
    EXPECT_EQ(homology(*r.hat), homology(hat_collapse_target(r, &m)));
    EXPECT_EQ(homology(*r.hat), homology(r.embed_image()));
}
