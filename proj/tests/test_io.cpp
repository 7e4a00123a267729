#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "nabla/generators.hpp"
#include "nabla/io.hpp"

using namespace nabla;
namespace fs = std::filesystem;

namespace {

SimplicialComplex parse(const std::string& text)
{
    std::istringstream in(text);
    return io::read_complex(in);
}

fs::path scratch_dir(const std::string& name)
{
    const auto d = fs::temp_directory_path() / ("nabla_io_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST(ComplexText, ParsesAndClosesDownward)
{
    const auto k = parse("# a comment\n\nsimplex 0 1 2\n  simplex 2 3  \n");
    EXPECT_EQ(k, make_complex({{0, 1, 2}, {2, 3}}));
}

TEST(ComplexText, RoundTrip)
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto k = gen::random_complex(rng, 8, 3, 5);
        for (bool all : {false, true}) {
            EXPECT_EQ(parse(io::complex_to_string(k, all)), k);
        }
    }
    EXPECT_EQ(io::complex_to_string(make_complex({{0, 1}, {1, 2}})),
              "# vertices=3 simplexes=5 dim=1\nsimplex 0 1\nsimplex 1 2\n");
}

TEST(ComplexText, Errors)
{
    EXPECT_THROW(parse("simplex 1 0\n"), input_error);
    EXPECT_THROW(parse("simplex 1 1\n"), input_error);
    EXPECT_THROW(parse("simplex\n"), input_error);
    EXPECT_THROW(parse("simplex a b\n"), input_error);
    EXPECT_THROW(parse("simplex -1\n"), input_error);
    EXPECT_THROW(parse("face 0 1\n"), input_error);
    EXPECT_THROW(parse("simplex 99999999999\n"), input_error);
    try {
        parse("simplex 0\nsimplex 2 1\n");
        FAIL();
    } catch (const input_error& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}

TEST(MapText, RoundTripThroughFiles)
{
    const auto dir = scratch_dir("map");
    io::write_file_atomic(dir / "a.cx", io::complex_to_string(make_complex({{0, 1, 2}})));
    io::write_file_atomic(dir / "b.cx", io::complex_to_string(make_complex({{5, 6}})));
    const auto src = share(make_complex({{0, 1, 2}}));
    const auto dst = share(make_complex({{5, 6}}));
    const SimplicialMap f(src, dst, {{0, 5}, {1, 5}, {2, 6}});
    std::ostringstream out;
    io::write_map(out, f, "a.cx", "b.cx");
    io::write_file_atomic(dir / "f.map", out.str());
    EXPECT_EQ(io::read_map_file(dir / "f.map"), f);

    io::write_file_atomic(dir / "bad.map", "source: a.cx\ntarget: b.cx\nmap 0 -> 5\nmap 0 -> 6\n");
    EXPECT_THROW(io::read_map_file(dir / "bad.map"), input_error);
    io::write_file_atomic(dir / "partial.map", "source: a.cx\ntarget: b.cx\nmap 0 -> 5\n");
    EXPECT_THROW(io::read_map_file(dir / "partial.map"), input_error);
    io::write_file_atomic(dir / "nosimplex.map", "source: a.cx\ntarget: b.cx\nmap 0 -> 5\nmap 1 -> 6\nmap 2 -> 7\n");
    EXPECT_THROW(io::read_map_file(dir / "nosimplex.map"), input_error);
    io::write_file_atomic(dir / "header.map", "map 0 -> 5\n");
    EXPECT_THROW(io::read_map_file(dir / "header.map"), input_error);
    EXPECT_THROW(io::read_map_file(dir / "missing.map"), input_error);
    fs::remove_all(dir);
}

TEST(TowerText, RoundTrip)
{
    for (const auto& name : example_tower_names()) {
        const auto t = example_tower(name, 3);
        std::ostringstream out;
        io::write_tower(out, t);
        std::istringstream in(out.str());
        const auto back = io::read_tower(in);
        ASSERT_EQ(back.size(), t.size());
        for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(*back.levels[i], *t.levels[i]);
        for (std::size_t i = 0; i < t.bonds.size(); ++i) EXPECT_EQ(back.bonds[i].assignment(), t.bonds[i].assignment());
        std::ostringstream again;
        io::write_tower(again, back);
        EXPECT_EQ(again.str(), out.str());
    }
}

TEST(TowerText, Errors)
{
    auto read = [](const std::string& s) {
        std::istringstream in(s);
        return io::read_tower(in);
    };
    EXPECT_THROW(read(""), input_error);
    EXPECT_THROW(read("levels: 0\n"), input_error);
    EXPECT_THROW(read("levels: 1\nlevel 1\nsimplex 0\nend\n"), input_error);
    EXPECT_THROW(read("levels: 1\nlevel 0\nsimplex 0\n"), input_error);
    EXPECT_THROW(read("levels: 1\nlevel 0\nsimplex 0\nend\nextra\n"), input_error);
    // bond sends an edge to a non-simplex
    EXPECT_THROW(read("levels: 2\nlevel 0\nsimplex 0\nsimplex 1\nend\nlevel 1\nsimplex 0 1\nend\n"
                      "bond 0\nmap 0 -> 0\nmap 1 -> 1\nend\n"),
                 input_error);
    EXPECT_NO_THROW(read("levels: 2\nlevel 0\nsimplex 0 1\nend\nlevel 1\nsimplex 0 1\nend\n"
                         "bond 0\nmap 0 -> 0\nmap 1 -> 1\nend\n"));
}

TEST(FamilyText, RoundTripWithEmptyMembers)
{
    SubcomplexFamily f;
    f.members.emplace_back();
    f.members.push_back(make_complex({{0, 1}}));
    f.members.push_back(make_complex({{0, 1}, {1, 2}}));
    std::ostringstream out;
    io::write_family(out, f);
    std::istringstream in(out.str());
    const auto back = io::read_family(in);
    ASSERT_EQ(back.members.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(back.members[i], f.members[i]);
}

TEST(Certificate, RoundTrip)
{
    const auto seq = collapse_Q(1, 3, 1);
    std::ostringstream out;
    io::write_certificate(out, seq);
    std::istringstream in(out.str());
    const auto back = io::read_certificate(in);
    EXPECT_EQ(back.start, seq.start);
    EXPECT_EQ(back.finish, seq.finish);
    ASSERT_EQ(back.steps.size(), seq.steps.size());
    for (std::size_t i = 0; i < seq.steps.size(); ++i) {
        EXPECT_EQ(back.steps[i].free_face, seq.steps[i].free_face);
        EXPECT_EQ(back.steps[i].cofacet, seq.steps[i].cofacet);
    }
}

TEST(Certificate, StreamingStopsEarlyAndRejectsGarbage)
{
    std::istringstream in("collapse start=a finish=b\nstep x < y\nstep z < w\n");
    std::string s, f;
    int seen = 0;
    io::read_certificate(in, s, f, [&](const std::string&, const std::string&) { return ++seen < 1; });
    EXPECT_EQ(seen, 1);
    EXPECT_EQ(s, "a");
    EXPECT_EQ(f, "b");

    auto read = [](const std::string& text) {
        std::istringstream i(text);
        return io::read_certificate(i);
    };
    EXPECT_THROW(read(""), input_error);
    EXPECT_THROW(read("collapse a b\n"), input_error);
    EXPECT_THROW(read("collapse start=a finish=b\nstep x y\n"), input_error);
    EXPECT_THROW(read("collapse start=a finish=b\nstep x < y z\n"), input_error);
    EXPECT_EQ(read("collapse start=a finish=b\n# none\n").steps.size(), 0u);
}

TEST(Digest, KnownValues)
{
    EXPECT_EQ(io::digest(""), "cbf29ce484222325");
    EXPECT_EQ(io::digest("a"), "af63dc4c8601ec8c");
    EXPECT_NE(io::digest("ab"), io::digest("ba"));
}

TEST(AtomicWrite, ReplacesContentsAndLeavesNoTemporary)
{
    const auto dir = scratch_dir("atomic");
    const auto p = dir / "out.txt";
    io::write_file_atomic(p, "first\n");
    io::write_file_atomic(p, "second\n");
    EXPECT_EQ(io::read_text_file(p), "second\n");
    EXPECT_FALSE(fs::exists(dir / "out.txt.tmp"));
    EXPECT_THROW(io::write_file_atomic(dir / "no" / "such" / "dir.txt", "x"), input_error);
    fs::remove_all(dir);
}
