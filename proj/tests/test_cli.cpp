#include "cli.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace dmflag;
using namespace dmflag::cli;

namespace {

std::string slurp(const std::string& name) {
    std::ifstream in(std::string(DMFLAG_DATA_DIR) + "/" + name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kRing = R"("ring": {"field": "QQ", "variables": ["x", "y"]})";

std::string doc(const std::string& objects, const std::string& task = "{}") {
    return std::string("{") + kRing + R"(, "objects": )" + objects + R"(, "task": )" + task + "}";
}

std::string where(const Outcome& o) { return o.report["error"]["where"].get<std::string>(); }

}  // namespace

TEST_CASE("adams and exit codes") {
    Outcome a = run("adams", slurp("koszul2_fold.json"), Flags{.k = 2});
    REQUIRE(a.exit_code == 0);
    CHECK(a.report["result"] == Json::parse(R"({"chi_psi": 4, "chi": 1, "factor": 4})"));

    Outcome two = run("adams", doc(R"({"K": {"kind": "koszul", "elements": ["x", "y^2"]}})"));
    CHECK(two.report["result"]["chi"] == 2);
    CHECK(two.report["result"]["chi_psi"] == 8);
    CHECK(two.report["result"]["factor"] == 4);
    CHECK(run("adams", doc(R"({"K": {"kind": "koszul", "elements": ["x"]}})")).exit_code == 2);

    Outcome c = run("check", slurp("not_square_zero.json"));
    CHECK(c.exit_code == 1);
    CHECK(c.report["result"]["ok"] == false);
    CHECK(c.report["result"].contains("block"));

    Outcome ok = run("check", slurp("be_example.json"));
    CHECK(ok.exit_code == 0);
}

TEST_CASE("input errors carry a location") {
    Outcome bad_poly = run("check", doc(R"({"D": {"kind": "dm", "modulus": 1, "degree": [0], "diff": [["x+"]]}})"));
    CHECK(bad_poly.exit_code == 2);
    CHECK(where(bad_poly) == "objects.D.diff[0][0]");

    Outcome ragged = run("check", doc(R"({"D": {"kind": "dm", "modulus": 1, "degree": [0, 0], "diff": [["x", "y"], ["0"]]}})"));
    CHECK(ragged.exit_code == 2);
    CHECK(where(ragged) == "objects.D.diff[1]");

    Outcome no_ring = run("check", R"({"objects": {}})");
    CHECK(no_ring.exit_code == 2);
    CHECK(where(no_ring) == "$");

    Outcome field = run("check", R"({"ring": {"field": 12}, "objects": {}})");
    CHECK(where(field) == "ring.field");

    Outcome dangling = run("homology", doc(R"({"D": {"kind": "dm", "modulus": 1, "degree": [0], "diff": [["0"]]}})",
                                           R"({"input": "E"})"));
    CHECK(where(dangling) == "task.input");

    Outcome morph = run("check", doc(R"({"f": {"kind": "morphism", "source": "A", "target": "A", "matrix": []}})"));
    CHECK(where(morph) == "objects.f.source");

    Outcome cmd = run("bogus", slurp("be_example.json"));
    CHECK(cmd.exit_code == 2);
    CHECK(where(cmd) == "command");

    Outcome json = run("check", "{\"ring\": ");
    CHECK(json.exit_code == 2);

    Outcome flag = run("perturb", doc(R"({"F": {"kind": "flag", "modulus": 1, "degree": [0, 0], "level": [1, 0],
                                               "diff": [["0", "x"], ["0", "0"]]}})"));
    CHECK(flag.exit_code == 2);
    CHECK(where(flag) == "objects.F.level");
    Outcome flag_check = run("check", doc(R"({"F": {"kind": "flag", "modulus": 1, "degree": [0, 0], "level": [1, 0],
                                                   "diff": [["0", "x"], ["0", "0"]]}})"));
    CHECK(flag_check.exit_code == 1);
}

TEST_CASE("deterministic output with a content hash") {
    const std::string text = slurp("be_example.json");
    Outcome a = run("quasimin", text), b = run("quasimin", text);
    CHECK(a.report.dump() == b.report.dump());
    CHECK(a.report["provenance"]["input_sha256"] == sha256_hex(text));
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(a.report["result"]["level_ranks"] == Json::parse("[1, 2, 1]"));

    Outcome s1 = run("lift", text, Flags{.seed = 3}), s2 = run("lift", text, Flags{.seed = 3});
    CHECK(s1.report.dump() == s2.report.dump());
    CHECK(s1.exit_code == 0);
}

TEST_CASE("flags override the task block") {
    const std::string text = slurp("koszul_f3.json");
    Outcome e1 = run("frobenius", text, Flags{.e = 1});
    CHECK(e1.report["result"]["dutta"].size() == 2);
    Outcome task = run("frobenius", text);
    CHECK(task.report["result"]["dutta"].size() == 4);
    CHECK(task.report["result"]["dutta"] == Json::parse("[1, 1, 1, 1]"));

    Outcome lex = run("homology", slurp("be_example.json"), Flags{.ring_order = "lex"});
    CHECK(lex.exit_code == 0);
    CHECK(lex.report["result"]["total"] == 1);
    CHECK(run("homology", slurp("be_example.json"), Flags{.ring_order = "elim"}).exit_code == 2);

    Outcome cap = run("quasimin", slurp("be_example.json"), Flags{.length_cap = 0});
    CHECK(cap.exit_code == 2);

    // R alone has infinite-length homology; the codimension makes the profile usable
    const std::string R1 = doc(R"({"R": {"kind": "dm", "modulus": 2, "degree": [0], "diff": [["0"]]}})");
    CHECK(run("trc", R1).exit_code == 2);
    Outcome withc = run("trc", R1, Flags{.codim = 0});
    CHECK(withc.exit_code == 0);
    CHECK(withc.report["result"]["verdict"] == "holds");
}

TEST_CASE("objects from complexes") {
    const std::string text = doc(R"({"C": {"kind": "complex", "weights": [[0], [1]], "d": {"1": [["x"]]}, "fold": 2}})");
    Outcome h = run("homology", text);
    REQUIRE(h.exit_code == 0);
    CHECK(h.report["result"]["total"] == nullptr);
    Outcome bad = run("homology", doc(R"({"C": {"kind": "complex", "weights": [[0], [1], [2]],
                                                "d": {"1": [["x"]], "2": [["1"]]}}})"));
    CHECK(bad.exit_code == 2);
    CHECK(where(bad) == "objects.C.d");

    Outcome t = run("tensor-test", slurp("kdelta_retract.json"));
    CHECK(t.exit_code == 0);
    CHECK(t.report["result"]["within"] == false);
    CHECK(t.report["result"]["applicable"] == false);
}
