// nabla-kit: command-line front end for the nabla library.
//
// Exit status: 0 success / PASS, 1 FAIL, 2 usage or input error, 3 budget exceeded.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nabla/nabla.hpp"
#include "nabla/selftest.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace nabla;

namespace {

enum Exit { ok = 0, fail = 1, usage = 2, over_budget = 3 };

struct Context
{
    std::size_t budget_cells = 0;
    long long budget_ms = 0;
    bool report = false;
    std::string output;  // file path or prefix; empty means stdout

    Budget budget;
    json run = json::object();

    void start(const std::vector<std::string>& argv)
    {
        if (budget_cells) budget.with_cells(budget_cells);
        if (budget_ms) budget.with_milliseconds(budget_ms);
        run["command"] = argv;
        run["inputs"] = json::array();
        run["outputs"] = json::array();
        run["counters"] = json::object();
    }

    void input(const std::string& path)
    {
        run["inputs"].push_back({{"path", path}, {"digest", io::digest(io::read_text_file(path))}});
    }

    void count(const std::string& key, std::size_t value) { run["counters"][key] = value; }

    /// Writes to -o (atomically) or to stdout.
    void emit(const std::string& text, const std::string& path_override = {})
    {
        const std::string path = path_override.empty() ? output : path_override;
        if (path.empty()) {
            std::cout << text;
            return;
        }
        budget.check_time();
        io::write_file_atomic(path, text);
        run["outputs"].push_back({{"path", path}, {"digest", io::digest(text)}});
    }
};

SimplicialComplex load_complex(Context& cx, const std::string& path)
{
    cx.input(path);
    return io::read_complex_file(path);
}

std::string verdict_line(bool pass, const std::string& detail)
{
    return std::string(pass ? "PASS" : "FAIL") + (detail.empty() ? "" : " " + detail) + "\n";
}

// --- complex commands ------------------------------------------------------

int cmd_build(Context& cx, const std::string& path, bool all)
{
    const SimplicialComplex k = load_complex(cx, path);
    cx.budget.charge(k.size());
    cx.count("simplexes", k.size());
    cx.emit(io::complex_to_string(k, all));
    return ok;
}

int cmd_bary(Context& cx, const std::string& path, bool all)
{
    const SimplicialComplex k = load_complex(cx, path);
    const SimplicialComplex b = barycentric(k, cx.budget);
    cx.count("simplexes", b.size());
    std::ostringstream os;
    io::write_complex(os, b, all, [&](VertexId v) { return k.simplex(v).to_string(); });
    cx.emit(os.str());
    return ok;
}

int cmd_resolve(Context& cx, const std::string& path, int n, bool all)
{
    const Resolution r = resolve(load_complex(cx, path), n, cx.budget);
    cx.count("hat_simplexes", r.hat->size());
    cx.count("bary_simplexes", r.flat->size());
    auto label = [&](VertexId v) { return r.vertex_label(v); };
    std::ostringstream hat;
    io::write_complex(hat, *r.hat, all, label);
    if (cx.output.empty()) {
        std::cout << hat.str();
        return ok;
    }
    const fs::path prefix(cx.output);
    const std::string stem = prefix.filename().string();
    std::ostringstream bary, embed, project;
    io::write_complex(bary, *r.flat, all, [&](VertexId v) { return r.base->simplex(v).to_string(); });
    io::write_map(embed, r.embed, stem + ".bary.cx", stem + ".hat.cx");
    io::write_map(project, r.project, stem + ".hat.cx", stem + ".bary.cx");
    cx.emit(hat.str(), cx.output + ".hat.cx");
    cx.emit(bary.str(), cx.output + ".bary.cx");
    cx.emit(embed.str(), cx.output + ".embed.map");
    cx.emit(project.str(), cx.output + ".project.map");
    return ok;
}

int cmd_lift(Context& cx, const std::string& path, int n)
{
    cx.input(path);
    const SimplicialMap f = io::read_map_file(path);
    const Lift l = lift(f, n, cx.budget);
    const bool nondeg = is_nondegenerate(l.map);
    cx.count("source_simplexes", l.source.hat->size());
    cx.count("target_simplexes", l.target.hat->size());
    cx.run["nondegenerate"] = nondeg;
    if (cx.output.empty()) {
        std::ostringstream os;
        os << "# input map nondegenerate=" << (is_nondegenerate(f) ? "yes" : "no")
           << " lift nondegenerate=" << (nondeg ? "yes" : "no") << '\n';
        io::write_map_body(os, l.map);
        std::cout << os.str();
        return ok;
    }
    const std::string stem = fs::path(cx.output).filename().string();
    std::ostringstream src, dst, map;
    io::write_complex(src, *l.source.hat, false, [&](VertexId v) { return l.source.vertex_label(v); });
    io::write_complex(dst, *l.target.hat, false, [&](VertexId v) { return l.target.vertex_label(v); });
    io::write_map(map, l.map, stem + ".source.cx", stem + ".target.cx");
    cx.emit(src.str(), cx.output + ".source.cx");
    cx.emit(dst.str(), cx.output + ".target.cx");
    cx.emit(map.str(), cx.output + ".map");
    return ok;
}

int cmd_grayson(Context& cx, int m, int n, const std::string& flavor)
{
    const CellComplex c = enumerate_cells(m, n, flavor == "q" ? Flavor::Q : Flavor::R, cx.budget);
    cx.count("cells", c.cells.size());
    cx.emit(format_cell_listing(c));
    return ok;
}

int cmd_homology(Context& cx, const std::string& path)
{
    const SimplicialComplex k = load_complex(cx, path);
    cx.emit(homology(k, cx.budget).to_string());
    return ok;
}

// --- collapses ---------------------------------------------------------------

int cmd_collapse_q(Context& cx, int m, int n, std::optional<int> floor)
{
    const CollapseSequence seq = collapse_Q(m, n, floor.value_or(m), cx.budget);
    cx.count("steps", seq.steps.size());
    std::ostringstream os;
    io::write_certificate(os, seq);
    cx.emit(os.str());
    return ok;
}

int cmd_collapse_hat(Context& cx, const std::string& path, int n, const std::string& rel_path)
{
    const Resolution r = resolve(load_complex(cx, path), n, cx.budget);
    std::optional<SimplicialComplex> rel;
    if (!rel_path.empty()) rel = load_complex(cx, rel_path);
    std::ostringstream os;
    io::write_certificate_header(os, hat_descriptor(n), rel ? "hat(M,n-1)+e" : "e");
    std::size_t steps = 0;
    collapse_hat_stream(
        r, rel ? &*rel : nullptr,
        [&](const Simplex& f, const Simplex& c) {
            io::write_certificate_step(os, f.to_string(), c.to_string());
            cx.budget.charge();
            ++steps;
        },
        cx.budget);
    cx.count("steps", steps);
    cx.count("hat_simplexes", r.hat->size());
    cx.emit(os.str());
    return ok;
}

std::optional<std::pair<int, int>> parse_q(const std::string& id)
{
    int m = 0, n = 0;
    char tail = 0;
    if (std::sscanf(id.c_str(), "Q(%d,%d%c", &m, &n, &tail) == 3 && tail == ')') return {{m, n}};
    return std::nullopt;
}

std::optional<int> parse_hat(const std::string& id)
{
    int n = 0;
    char tail = 0;
    if (std::sscanf(id.c_str(), "hat(n=%d%c", &n, &tail) == 2 && tail == ')') return n;
    return std::nullopt;
}

/**
 * Replays a certificate.  The ambient complex is read off the header:
 * Q(m,n) needs nothing else, hat(n=N) needs --complex, any other start id
 * is replayed on the --complex file itself.
 */
int cmd_verify(Context& cx, const std::string& cert_path, const std::string& complex_path,
               const std::string& rel_path)
{
    cx.input(cert_path);
    std::istringstream in(io::read_text_file(cert_path));
    std::string start, finish;
    std::optional<HasseComplex> h;
    std::optional<Resolution> res;
    std::optional<CollapseReplayer> replay;
    std::vector<std::string> expected;
    bool check_finish = true;

    auto prepare = [&]() {
        if (replay) return;
        if (auto q = parse_q(start)) {
            h = HasseComplex::of(enumerate_cells(q->first, q->second, Flavor::Q, cx.budget));
            if (auto fq = parse_q(finish); fq && fq->first == q->first) {
                for (const Cell& c : enumerate_cells(fq->first, fq->second, Flavor::Q, cx.budget).cells) {
                    expected.push_back(c.to_string());
                }
            } else {
                throw input_error("unrecognized finish id '" + finish + "' for " + start);
            }
        } else {
            if (complex_path.empty()) throw input_error("certificate " + start + " needs --complex");
            SimplicialComplex k = load_complex(cx, complex_path);
            if (auto n = parse_hat(start)) {
                res = resolve(std::move(k), *n, cx.budget);
                h = HasseComplex::of(*res->hat);
                std::optional<SimplicialComplex> rel;
                if (finish == "hat(M,n-1)+e") {
                    if (rel_path.empty()) throw input_error("finish " + finish + " needs --rel-subcomplex");
                    rel = load_complex(cx, rel_path);
                } else if (finish != "e") {
                    throw input_error("unrecognized finish id '" + finish + "'");
                }
                const SimplicialComplex target = hat_collapse_target(*res, rel ? &*rel : nullptr);
                for (const Simplex& s : target.simplexes()) expected.push_back(s.to_string());
            } else {
                h = HasseComplex::of(k);
                check_finish = false;
            }
        }
        cx.count("cells", h->size());
        replay.emplace(*h, false);
    };

    std::size_t steps = 0;
    io::read_certificate(in, start, finish, [&](const std::string& f, const std::string& c) {
        prepare();
        cx.budget.charge();
        ++steps;
        return replay->step(f, c);
    });
    prepare();
    const ValidationReport rep = replay->finish();
    cx.count("steps", steps);

    std::string detail;
    bool pass = rep.ok;
    if (!rep.ok) {
        detail = "step " + std::to_string(*rep.failed_step) + ": " + rep.message;
    } else if (check_finish && !finishes_at(*h, rep, expected)) {
        pass = false;
        std::vector<std::string> got = rep.remaining_labels(*h);
        std::sort(got.begin(), got.end());
        std::sort(expected.begin(), expected.end());
        std::vector<std::string> extra, missing;
        std::set_difference(got.begin(), got.end(), expected.begin(), expected.end(), std::back_inserter(extra));
        std::set_difference(expected.begin(), expected.end(), got.begin(), got.end(), std::back_inserter(missing));
        detail = "remaining cells differ from " + finish + ": ";
        detail += extra.empty() ? "missing " + missing.front() : "left over " + extra.front();
    } else {
        detail = "steps=" + std::to_string(steps) + " remaining=" + std::to_string(rep.remaining.size());
    }
    cx.run["verdict"] = pass ? "PASS" : "FAIL";
    cx.emit(verdict_line(pass, detail));
    return pass ? ok : fail;
}

// --- towers ------------------------------------------------------------------

std::string tower_text(const Tower& t)
{
    std::ostringstream os;
    io::write_tower(os, t);
    return os.str();
}

Tower load_tower(Context& cx, const std::string& path)
{
    cx.input(path);
    return io::read_tower_file(path);
}

int cmd_tower_example(Context& cx, const std::string& name, int size, const TowerParams& params)
{
    const Tower t = example_tower(name, size, params);
    std::size_t total = 0;
    for (const auto& l : t.levels) total += l->size();
    cx.budget.charge(total);
    cx.count("simplexes", total);
    cx.emit(tower_text(t));
    return ok;
}

int cmd_tower_check(Context& cx, const std::string& tower_path, const std::string& family_path,
                    const std::string& mode)
{
    const Tower t = load_tower(cx, tower_path);
    cx.input(family_path);
    const SubcomplexFamily f = io::read_family_file(family_path);
    const FamilyCheck fc = check_family(t, f, mode == "lfd" ? FamilyMode::lfd : FamilyMode::decomposable);
    std::string detail;
    if (!fc.ok) {
        detail = "level " + std::to_string(*fc.level) + " simplex " + fc.simplex->to_string() + ": " + fc.message;
    }
    cx.run["verdict"] = fc.ok ? "PASS" : "FAIL";
    cx.emit(verdict_line(fc.ok, detail));
    return fc.ok ? ok : fail;
}

int cmd_tower_resolve(Context& cx, const std::string& path, int n)
{
    const ResolvedTower rt = resolve_tower(load_tower(cx, path), n, cx.budget);
    std::size_t degenerate = 0;
    for (const auto& b : rt.tower.bonds) degenerate += !is_nondegenerate(b);
    cx.count("degenerate_bonds", degenerate);
    cx.emit(tower_text(rt.tower));
    return ok;
}

int cmd_tower_skeleton(Context& cx, const std::string& path, int n)
{
    cx.emit(tower_text(skeleton_tower(load_tower(cx, path), n)));
    return ok;
}

int cmd_tower_surjectivize(Context& cx, const std::string& path)
{
    cx.emit(tower_text(surjectivize(load_tower(cx, path))));
    return ok;
}

int cmd_tower_trace(Context& cx, const std::string& path, std::size_t level, const std::vector<VertexId>& simplex)
{
    const Tower t = load_tower(cx, path);
    const auto images = trace_simplex(t, level, Simplex::from_unsorted(simplex));
    std::ostringstream os;
    std::size_t lvl = level;
    for (const Simplex& s : images) os << "level " << --lvl << ": " << s.to_string() << '\n';
    cx.emit(os.str());
    return ok;
}

int cmd_selftest(Context& cx, const selftest::Options& opt)
{
    bool all = true;
    std::ostringstream os;
    const auto results = selftest::run_all(opt, [&](const selftest::Result& r) {
        std::cout << selftest::format(r) << std::endl;
        all = all && r.pass;
    });
    for (const auto& r : results) cx.run["criteria"][std::to_string(r.id)] = r.pass ? "PASS" : "FAIL";
    cx.run["verdict"] = all ? "PASS" : "FAIL";
    std::cout << "selftest " << (all ? "PASS" : "FAIL") << std::endl;
    return all ? ok : fail;
}

void add_common(CLI::App* sub, Context& cx, bool with_output = true)
{
    sub->add_option("--budget-cells", cx.budget_cells, "Abort (exit 3) after materializing this many cells");
    sub->add_option("--budget-ms", cx.budget_ms, "Abort (exit 3) after this many milliseconds");
    sub->add_flag("--report", cx.report, "Print a JSON run report to stderr");
    if (with_output) sub->add_option("-o,--output", cx.output, "Output file (or prefix for multi-file outputs)");
}

}  // namespace

int main(int argc, char** argv)
{
    const auto t0 = std::chrono::steady_clock::now();
    CLI::App app{"nabla-kit: non-degenerate resolutions, collapse certificates and towers"};
    app.require_subcommand(1);
    Context cx;
    std::function<int()> action;

    std::string path, path2, path3, flavor = "r", mode = "decomposable", name;
    int n = -1, m = -1, size = 4;
    std::optional<int> floor;
    bool all = false;
    std::size_t level = 0;
    std::vector<VertexId> simplex;
    TowerParams params;
    selftest::Options st;

    auto* build = app.add_subcommand("build", "Close generators downward and print the complex");
    build->add_option("complex", path, "Complex file")->required();
    build->add_flag("--all", all, "List every simplex, not only maximal ones");
    add_common(build, cx);
    build->callback([&] { action = [&] { return cmd_build(cx, path, all); }; });

    auto* bary = app.add_subcommand("bary", "Barycentric subdivision");
    bary->add_option("complex", path, "Complex file")->required();
    bary->add_flag("--all", all, "List every simplex");
    add_common(bary, cx);
    bary->callback([&] { action = [&] { return cmd_bary(cx, path, all); }; });

    auto* res = app.add_subcommand("resolve", "Non-degenerate resolution hat(K, n)");
    res->add_option("complex", path, "Complex file")->required();
    res->add_option("--n", n, "Resolution height (>= dim K)")->required();
    res->add_flag("--all", all, "List every simplex");
    add_common(res, cx);
    res->callback([&] { action = [&] { return cmd_resolve(cx, path, n, all); }; });

    auto* lf = app.add_subcommand("lift", "Lift a simplicial map to the resolutions");
    lf->add_option("map", path, "Map file")->required();
    lf->add_option("--n", n, "Resolution height")->required();
    add_common(lf, cx);
    lf->callback([&] { action = [&] { return cmd_lift(cx, path, n); }; });

    auto* gr = app.add_subcommand("grayson", "List the cells of R(m, n) or Q(m, n)");
    gr->add_option("--m", m, "Number of factors minus one")->required();
    gr->add_option("--n", n, "Top level")->required();
    gr->add_option("--flavor", flavor, "r or q")->check(CLI::IsMember({"r", "q"}));
    add_common(gr, cx);
    gr->callback([&] { action = [&] { return cmd_grayson(cx, m, n, flavor); }; });

    auto* col = app.add_subcommand("collapse", "Emit a collapse certificate");
    col->add_option("complex", path, "Complex file (omit for Q(m, n))");
    col->add_option("--m", m, "Q mode: number of factors minus one");
    col->add_option("--n", n, "Top level / resolution height")->required();
    col->add_option("--relative-floor", floor, "Q mode: collapse onto Q(m, floor)");
    col->add_option("--rel-subcomplex", path2, "Complex mode: relative subcomplex M (dim M <= n-1)");
    add_common(col, cx);
    col->callback([&] {
        if (path.empty() == (m < 0)) throw CLI::ValidationError("collapse", "give either a complex file or --m");
        if (!path.empty() && floor) throw CLI::ValidationError("collapse", "--relative-floor applies to Q mode");
        if (path.empty() && !path2.empty()) throw CLI::ValidationError("collapse", "--rel-subcomplex needs a complex");
        action = [&] { return path.empty() ? cmd_collapse_q(cx, m, n, floor) : cmd_collapse_hat(cx, path, n, path2); };
    });

    auto* ver = app.add_subcommand("verify-collapse", "Replay a certificate; prints PASS or FAIL");
    ver->add_option("certificate", path, "Certificate file")->required();
    ver->add_option("--complex", path2, "Complex file the certificate refers to");
    ver->add_option("--rel-subcomplex", path3, "Relative subcomplex M");
    add_common(ver, cx);
    ver->callback([&] { action = [&] { return cmd_verify(cx, path, path2, path3); }; });

    auto* hom = app.add_subcommand("homology", "Integer homology");
    hom->add_option("complex", path, "Complex file")->required();
    add_common(hom, cx);
    hom->callback([&] { action = [&] { return cmd_homology(cx, path); }; });

    auto* tw = app.add_subcommand("tower", "Finite towers of simplicial maps");
    tw->require_subcommand(1);

    auto* tex = tw->add_subcommand("example", "Print a built-in example tower");
    tex->add_option("name", name, "Tower name")->required()->check(CLI::IsMember(example_tower_names()));
    tex->add_option("--size", size, "Number of levels");
    tex->add_option("--p", params.p, "Solenoid degree");
    tex->add_option("--c", params.c, "Solenoid base cycle length");
    tex->add_option("--sphere-dim", params.sphere_dim, "Hawaiian earring sphere dimension");
    add_common(tex, cx);
    tex->callback([&] { action = [&] { return cmd_tower_example(cx, name, size, params); }; });

    auto* tch = tw->add_subcommand("check", "Check a subcomplex family against a tower");
    tch->add_option("tower", path, "Tower file")->required();
    tch->add_option("family", path2, "Family file")->required();
    tch->add_option("--mode", mode, "lfd or decomposable")->check(CLI::IsMember({"lfd", "decomposable"}));
    add_common(tch, cx);
    tch->callback([&] { action = [&] { return cmd_tower_check(cx, path, path2, mode); }; });

    auto* tre = tw->add_subcommand("resolve", "Resolve every level and lift the bonds");
    tre->add_option("tower", path, "Tower file")->required();
    tre->add_option("--n", n, "Resolution height")->required();
    add_common(tre, cx);
    tre->callback([&] { action = [&] { return cmd_tower_resolve(cx, path, n); }; });

    auto* tsk = tw->add_subcommand("skeleton", "Levelwise n-skeleta");
    tsk->add_option("tower", path, "Tower file")->required();
    tsk->add_option("--n", n, "Skeleton dimension")->required();
    add_common(tsk, cx);
    tsk->callback([&] { action = [&] { return cmd_tower_skeleton(cx, path, n); }; });

    auto* tsu = tw->add_subcommand("surjectivize", "Replace levels by iterated images");
    tsu->add_option("tower", path, "Tower file")->required();
    add_common(tsu, cx);
    tsu->callback([&] { action = [&] { return cmd_tower_surjectivize(cx, path); }; });

    auto* ttr = tw->add_subcommand("trace", "Images of a simplex down the tower");
    ttr->add_option("tower", path, "Tower file")->required();
    ttr->add_option("--level", level, "Level of the simplex")->required();
    ttr->add_option("--simplex", simplex, "Vertex ids")->required()->delimiter(',');
    add_common(ttr, cx);
    ttr->callback([&] { action = [&] { return cmd_tower_trace(cx, path, level, simplex); }; });

    auto* sel = app.add_subcommand("selftest", "Run the acceptance suite");
    sel->add_option("--seed", st.seed, "Seed for the random corpora");
    sel->add_option("--corpus-vertices", st.corpus_vertices, "Vertex bound for the isomorphism-class corpus")
        ->check(CLI::Range(1, 5));
    sel->add_option("--max-q", st.max_q, "Largest n for the Q(m, n) collapses")->check(CLI::Range(1, 7));
    add_common(sel, cx, false);
    sel->callback([&] { action = [&] { return cmd_selftest(cx, st); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    cx.start(std::vector<std::string>(argv + 1, argv + argc));
    int code = ok;
    try {
        code = action();
    } catch (const budget_exceeded& e) {
        std::cerr << "nabla-kit: " << e.what() << '\n';
        cx.run["error"] = e.what();
        code = over_budget;
    } catch (const std::exception& e) {
        std::cerr << "nabla-kit: " << e.what() << '\n';
        cx.run["error"] = e.what();
        code = usage;
    }
    if (cx.report) {
        cx.run["exit"] = code;
        cx.run["time_ms"] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << cx.run.dump(2) << '\n';
    }
    return code;
}
