// End-to-end CLI tests: every subcommand runs against a committed fixture.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

int failures = 0;

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(TOOL_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    RunResult res{-1, {}};
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return res;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.output.append(buf.data(), n);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cout << "[FAIL] " << what << "\n";
    } else {
        std::cout << "[ok]   " << what << "\n";
    }
}

void expect_exit(const RunResult& r, int code, const std::string& what) {
    if (r.exit_code != code) {
        ++failures;
        std::cout << "[FAIL] " << what << ": exit " << r.exit_code << " != " << code
                  << "\n--- output ---\n" << r.output << "---------------\n";
    } else {
        std::cout << "[ok]   " << what << "\n";
    }
}

}  // namespace

int main() {
    std::string tmpdir = "/tmp/cubilam_cli_XXXXXX";
    if (!mkdtemp(tmpdir.data())) {
        std::cout << "cannot create temp dir\n";
        return 1;
    }

    // --- lam check ---
    expect_exit(run("lam check " + fixture("invariant_leaf_d2.lam")), 0, "lam check passes");
    expect_exit(run("lam check " + fixture("crossing_d3.lam")), 2, "lam check fails on crossing");
    {
        auto r = run("lam check " + fixture("triangle_d2.lam") + " --format kv");
        expect_exit(r, 0, "lam check kv");
        expect(r.output.find("verdict=pass") != std::string::npos, "lam check kv verdict");
    }

    // --- lam pullback ---
    {
        std::string out = tmpdir + "/pb.lam";
        auto r = run("lam pullback " + fixture("invariant_leaf_d2.lam") + " --depth 1 -o " + out);
        expect_exit(r, 0, "lam pullback runs");
        std::string text = read_file(out);
        expect(text.find("leaf 1/6 1/3") != std::string::npos &&
                   text.find("leaf 2/3 5/6") != std::string::npos,
               "lam pullback adds the sibling pair");
    }

    // --- lam gaps ---
    {
        auto r = run("lam gaps " + fixture("leaf_third.lam") + " --format kv");
        expect_exit(r, 0, "lam gaps kv");
        expect(r.output.find("gaps=2") != std::string::npos, "lam gaps counts regions");
        expect(r.output.find("kind=fatou") != std::string::npos, "lam gaps reports kinds");
    }

    // --- lam quadgap ---
    {
        auto r = run("lam quadgap --major 1/3,2/3 --depth 2 --format kv");
        expect_exit(r, 0, "lam quadgap");
        expect(r.output.find("edges=7") != std::string::npos, "quadgap depth-2 edge count");
        expect(r.output.find("edge.0=1/27,2/27") != std::string::npos, "quadgap first edge");
        expect(r.output.find("1/9,2/9") != std::string::npos, "quadgap bridge edge");
    }
    expect_exit(run("lam quadgap --major 1/8,3/8 --depth 1"), 2, "quadgap rejects non-major");

    // --- lam canonical + cubioid + classify ---
    {
        std::string canon = tmpdir + "/cantor4.lam";
        expect_exit(run("lam canonical --major 1/3,2/3 --depth 4 -o " + canon), 0,
                    "lam canonical");
        expect_exit(run("lam cubioid " + canon), 0, "cubioid: canonical cantor");
        auto r = run("lam classify " + canon + " --major 1/3,2/3 --depth 4 --format kv");
        expect_exit(r, 0, "lam classify");
        expect(r.output.find("case=tunes") != std::string::npos, "classify case tunes");
        expect(r.output.find("cardioid_member=yes") != std::string::npos,
               "classify cardioid member");
    }
    expect_exit(run("lam cubioid " + fixture("empty.lam")), 0, "cubioid: empty lamination");
    {
        std::string pb = tmpdir + "/pair4.lam";
        expect_exit(run("lam pullback " + fixture("pair_d3.lam") + " --depth 4 -o " + pb), 0,
                    "pullback the rotational pair");
        auto r = run("lam cubioid " + pb + " --format kv");
        expect_exit(r, 2, "cubioid: rotational pair is negative");
        expect(r.output.find("rotational_sets=2") != std::string::npos,
               "cubioid reports two rotational sets");
    }

    // --- lam render ---
    {
        std::string svg = tmpdir + "/out.svg";
        auto r = run("lam render " + fixture("leaf_third.lam") + " -o " + svg);
        expect_exit(r, 0, "lam render");
        expect(read_file(svg) == read_file(std::string(GOLDEN_DIR) + "/leaf_third.svg"),
               "render output matches golden");
        expect_exit(run("lam render " + fixture("leaf_third.lam") + " -o " + svg +
                        " --highlight 1/5,2/5"),
                    4, "render rejects unknown highlight");
        expect_exit(run("lam render " + fixture("cantor_d2.lam") + " -o " + svg +
                        " --style straight --labels --highlight 1/3,2/3"),
                    0, "render with options");
    }

    // --- dyn tpq ---
    {
        auto r = run("dyn tpq --p 1 --q 2 --roots");
        expect_exit(r, 0, "dyn tpq");
        expect(r.output.find("(-2) + (-2)*b^2") != std::string::npos, "tpq polynomial");
        expect(r.output.find("0-1i") != std::string::npos &&
                   r.output.find("0+1i") != std::string::npos,
               "tpq roots +-i");
    }

    // --- dyn ray ---
    {
        std::string csv = tmpdir + "/ray.csv";
        auto r = run("dyn ray --lambda 0,0 --b 0,0 --theta 1/4 --csv " + csv);
        expect_exit(r, 0, "dyn ray lands");
        expect(r.output.find("landing:") != std::string::npos, "ray landing printed");
        std::string data = read_file(csv);
        expect(data.rfind("green,re,im", 0) == 0, "ray csv header");
        expect(data.size() > 200, "ray csv has samples");
    }

    // --- dyn petal ---
    expect_exit(run("dyn petal --q 1 --a 1,0 --r 10"), 0, "dyn petal certifies");
    expect_exit(run("dyn petal --q 2 --a 1,0 --r 0.01"), 4, "dyn petal fails for tiny r");

    // --- dyn stability ---
    {
        auto r = run("dyn stability --p 0 --q 1 --b 0.5,0 --theta 0 --delta 0.001 --grid 6");
        expect_exit(r, 0, "dyn stability");
        expect(r.output.find("stable") != std::string::npos, "stability verdict printed");
    }
    expect_exit(run("dyn stability --p 0 --q 1 --b 0,0 --theta 0 --delta 0.001"), 3,
                "stability precondition unmet (degenerate parabolic)");

    // --- kv formats on the dyn report commands ---
    {
        auto r = run("dyn petal --q 1 --a 1,0 --r 10 --format kv");
        expect_exit(r, 0, "dyn petal kv");
        expect(r.output.find("certified=yes") != std::string::npos, "petal kv verdict");
    }
    {
        auto r = run("dyn ray --lambda 0,0 --b 0,0 --theta 0 --format kv");
        expect_exit(r, 0, "dyn ray kv");
        expect(r.output.find("landed=yes") != std::string::npos, "ray kv verdict");
    }
    {
        auto r = run("dyn stability --p 0 --q 1 --b 0.5,0 --theta 0 --delta 0 --format kv");
        expect_exit(r, 0, "dyn stability kv");
        expect(r.output.find("verdict=stable") != std::string::npos, "stability kv verdict");
    }

    // --- usage errors ---
    expect_exit(run("lam"), 1, "missing subcommand is a usage error");
    expect_exit(run("lam cubioid /nonexistent.lam"), 4, "missing file reports failure");

    std::cout << (failures == 0 ? "ALL CLI TESTS PASSED\n"
                                : std::to_string(failures) + " CLI TESTS FAILED\n");
    return failures == 0 ? 0 : 1;
}
