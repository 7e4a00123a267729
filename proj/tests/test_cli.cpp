#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kit = NABLA_KIT_PATH;
const fs::path samples = NABLA_SAMPLES_DIR;
const fs::path golden = NABLA_GOLDEN_DIR;

struct Run
{
    int code = -1;
    std::string out;
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Runs nabla-kit inside the samples directory; stderr goes to `err_file` (or is discarded).
Run run(const std::string& args, const std::string& err_file = "/dev/null")
{
    const std::string cmd = "cd '" + samples.string() + "' && '" + kit + "' " + args + " 2>" + err_file;
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path scratch(const std::string& name)
{
    const auto d = fs::temp_directory_path() / ("nabla_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

void expect_golden(const std::string& args, const std::string& file)
{
    const auto r = run(args);
    EXPECT_EQ(r.code, 0) << args;
    EXPECT_EQ(r.out, slurp(golden / file)) << args;
}

}  // namespace

TEST(Golden, GraysonListings)
{
    expect_golden("grayson --m 1 --n 2 --flavor r", "grayson_r_1_2.txt");
    expect_golden("grayson --m 0 --n 2 --flavor q", "grayson_q_0_2.txt");
}

TEST(Golden, ComplexCommands)
{
    expect_golden("bary edge.cx", "bary_edge.txt");
    expect_golden("resolve edge.cx --n 1", "resolve_edge_1.txt");
    expect_golden("homology hollow_triangle.cx", "homology_hollow_triangle.txt");
    expect_golden("lift edge_to_point.map --n 1", "lift_edge_to_point_1.txt");
}

TEST(Golden, CollapseAndTrace)
{
    expect_golden("collapse --m 0 --n 2", "collapse_q_0_2.cert");
    expect_golden("tower trace nested_intervals.tower --level 3 --simplex 3,4", "trace_nested_3.txt");
}

TEST(Resolve, WritesAllFourArtifacts)
{
    const auto dir = scratch("resolve");
    const auto prefix = (dir / "tri").string();
    ASSERT_EQ(run("resolve hollow_triangle.cx --n 1 -o " + prefix).code, 0);
    for (const char* ext : {".hat.cx", ".bary.cx", ".embed.map", ".project.map"}) {
        EXPECT_TRUE(fs::exists(prefix + ext)) << ext;
    }
    // half-edge law: hat edges = e-image edges + vertices of K♭ (6 + 6)
    const auto hat = slurp(prefix + ".hat.cx");
    EXPECT_NE(hat.find("# vertices=12 simplexes=24 dim=1"), std::string::npos) << hat;
    fs::remove_all(dir);
}

TEST(Lift, WritesSourceTargetAndMap)
{
    const auto dir = scratch("lift");
    const auto prefix = (dir / "fold").string();
    ASSERT_EQ(run("lift fold.map --n 2 -o " + prefix).code, 0);
    const auto map = slurp(prefix + ".map");
    EXPECT_NE(map.find("source: fold.source.cx"), std::string::npos) << map;
    EXPECT_NE(map.find("target: fold.target.cx"), std::string::npos) << map;
    // the written map reads back through the same tool
    const auto again = run("homology " + prefix + ".source.cx");
    EXPECT_EQ(again.code, 0);
    EXPECT_EQ(again.out, "H_0: betti=1 torsion=\nH_1: betti=0 torsion=\nH_2: betti=0 torsion=\n");
    fs::remove_all(dir);
}

TEST(VerifyCollapse, AcceptsEngineOutput)
{
    const auto dir = scratch("verify");
    const auto q = (dir / "q.cert").string();
    ASSERT_EQ(run("collapse --m 1 --n 3 -o " + q).code, 0);
    auto r = run("verify-collapse " + q);
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("PASS steps=", 0), 0u) << r.out;

    const auto rel = (dir / "rel.cert").string();
    ASSERT_EQ(run("collapse --m 1 --n 4 --relative-floor 2 -o " + rel).code, 0);
    EXPECT_EQ(run("verify-collapse " + rel).code, 0);

    const auto hat = (dir / "hat.cert").string();
    ASSERT_EQ(run("collapse triangle.cx --n 3 -o " + hat).code, 0);
    r = run("verify-collapse " + hat + " --complex triangle.cx");
    EXPECT_EQ(r.code, 0) << r.out;

    const auto hrel = (dir / "hrel.cert").string();
    ASSERT_EQ(run("collapse hollow_triangle.cx --n 2 --rel-subcomplex edge.cx -o " + hrel).code, 0);
    r = run("verify-collapse " + hrel + " --complex hollow_triangle.cx --rel-subcomplex edge.cx");
    EXPECT_EQ(r.code, 0) << r.out;
    fs::remove_all(dir);
}

TEST(VerifyCollapse, RejectsTamperedCertificates)
{
    const auto dir = scratch("tamper");
    // the second step is removed before the first: {2} still has two cofacets
    const auto swapped = dir / "swapped.cert";
    std::ofstream(swapped) << "collapse start=Q(0,2) finish=Q(0,0)\nstep {2} < {0,2}\nstep {1,2} < {0,1,2}\n";
    auto r = run("verify-collapse " + swapped.string());
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.out.rfind("FAIL step 0:", 0), 0u) << r.out;

    // a valid prefix that stops early
    const auto shortc = dir / "short.cert";
    std::ofstream(shortc) << "collapse start=Q(0,2) finish=Q(0,0)\nstep {1,2} < {0,1,2}\n";
    r = run("verify-collapse " + shortc.string());
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.out.rfind("FAIL remaining cells differ", 0), 0u) << r.out;

    // a label that is not a cell is an input error
    const auto dangling = dir / "dangling.cert";
    std::ofstream(dangling) << "collapse start=Q(0,2) finish=Q(0,0)\nstep {7} < {0,7}\n";
    EXPECT_EQ(run("verify-collapse " + dangling.string()).code, 2);
    fs::remove_all(dir);
}

TEST(Towers, FamilyModes)
{
    EXPECT_EQ(run("tower check nested_intervals.tower nested_intervals.family --mode decomposable").code, 0);
    const auto r = run("tower check nested_intervals.tower nested_intervals.family --mode lfd");
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.out, "FAIL level 1 simplex [0]: simplex of L_1 maps outside L_0\n");
}

TEST(Towers, ResolvedTowerReadsBack)
{
    const auto dir = scratch("tower");
    const auto out = (dir / "resolved.tower").string();
    ASSERT_EQ(run("tower resolve nested_intervals.tower --n 1 -o " + out).code, 0);
    // the written tower parses back as input to another tower command
    ASSERT_EQ(run("tower skeleton " + out + " --n 0 -o " + (dir / "sk.tower").string()).code, 0);
    const auto text = slurp(out);
    EXPECT_EQ(text.rfind("levels: 4\n", 0), 0u);
    fs::remove_all(dir);
}

TEST(ExitCodes, UsageAndInputErrors)
{
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("no-such-command").code, 2);
    EXPECT_EQ(run("grayson --m 1").code, 2);
    EXPECT_EQ(run("grayson --m 3 --n 2 --flavor q").code, 2);
    EXPECT_EQ(run("homology missing.cx").code, 2);
    EXPECT_EQ(run("resolve triangle.cx --n 1").code, 2);
    EXPECT_EQ(run("tower example solenoid --size 3 --p 4").code, 2);
    EXPECT_EQ(run("tower trace nested_intervals.tower --level 3 --simplex 9").code, 2);

    const auto dir = scratch("bad");
    std::ofstream(dir / "bad.cx") << "simplex 2 1\n";
    EXPECT_EQ(run("homology " + (dir / "bad.cx").string()).code, 2);
    fs::remove_all(dir);
}

TEST(ExitCodes, BudgetExceeded)
{
    EXPECT_EQ(run("collapse --m 1 --n 5 --budget-cells 10").code, 3);
    EXPECT_EQ(run("resolve triangle.cx --n 4 --budget-cells 5").code, 3);
    EXPECT_EQ(run("collapse --m 1 --n 3 --budget-cells 1000000").code, 0);
}

TEST(Determinism, RepeatedRunsAreByteIdentical)
{
    for (const std::string args : {"collapse triangle.cx --n 3", "resolve hollow_triangle.cx --n 2",
                                   "grayson --m 2 --n 4 --flavor q", "tower resolve nested_intervals.tower --n 1"}) {
        const auto a = run(args), b = run(args);
        EXPECT_EQ(a.code, 0) << args;
        EXPECT_EQ(a.out, b.out) << args;
    }
    // -o writes exactly what stdout would show
    const auto dir = scratch("det");
    const auto file = (dir / "g.txt").string();
    ASSERT_EQ(run("grayson --m 1 --n 3 --flavor q -o " + file).code, 0);
    EXPECT_EQ(slurp(file), run("grayson --m 1 --n 3 --flavor q").out);
    fs::remove_all(dir);
}

TEST(Report, JsonGoesToStderr)
{
    const auto dir = scratch("report");
    const auto err = (dir / "err.json").string();
    const auto r = run("homology triangle.cx --report", err);
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.find('{'), std::string::npos);
    const auto j = nlohmann::json::parse(slurp(err));
    EXPECT_EQ(j["exit"], 0);
    EXPECT_EQ(j["inputs"].size(), 1u);
    EXPECT_EQ(j["inputs"][0]["path"], "triangle.cx");
    EXPECT_EQ(j["inputs"][0]["digest"].get<std::string>().size(), 16u);
    fs::remove_all(dir);
}
