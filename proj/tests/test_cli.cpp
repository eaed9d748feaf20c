#include "doctest.h"

#include "arboreal/cli.hpp"
#include "arboreal/equality.hpp"
#include "arboreal/errors.hpp"
#include "arboreal/mealy.hpp"
#include "arboreal/spec_file.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace arboreal;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        static int counter = 0;
        path = "cli_test_tmp_" + std::to_string(counter++) + ".txt";
        std::ofstream f(path);
        f << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("volume family output matches the published fractions") {
    const RunResult r = run_cli({"volume", "--family", "prop6", "--p", "2", "--n", "3",
                                 "--set", "1"});
    CHECK(r.code == 0);
    CHECK(r.out == "1/4\n");

    const RunResult thm5 =
        run_cli({"volume", "--family", "thm5", "--alphabet", "8", "--set", "2"});
    CHECK(thm5.code == 0);
    CHECK(thm5.out == "1/32\n");

    const RunResult dec = run_cli({"volume", "--family", "prop6", "--p", "2", "--n", "3",
                                   "--set", "1", "--decimal", "3"});
    CHECK(dec.out == "0.250\n");
}

TEST_CASE("level-order prints the order and the match verdict") {
    const RunResult r = run_cli({"level-order", "--preset", "A", "--p", "2", "--n", "3",
                                 "--omega", "1", "--level", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("order 1344\n") != std::string::npos);
    CHECK(r.out.find("MATCH\n") != std::string::npos);
}

TEST_CASE("folner prints the minimal size") {
    const RunResult r = run_cli({"folner", "--cyclic", "12", "--gens", "1,11", "--eps", "1/2"});
    CHECK(r.code == 0);
    CHECK(r.out == "4\n");
}

TEST_CASE("output is byte-identical across runs") {
    const std::vector<std::vector<std::string>> invocations = {
        {"volume", "--family", "prop6", "--p", "2", "--n", "3", "--set", "1,2,3"},
        {"level-order", "--preset", "Gamma", "--p", "2", "--n", "3", "--omega", "1",
         "--level", "1"},
        {"witness", "--rist", "--p", "2", "--n", "3", "--omega", "1", "--count", "5",
         "--seed", "9"},
        {"kesten", "--cyclic", "4", "--measure", "1:1/2 3:1/2", "--nmax", "3"},
        {"activity", "--preset", "A", "--p", "2", "--n", "3", "--omega", "2;1"},
    };
    for (const auto& args : invocations) {
        const RunResult first = run_cli(args);
        const RunResult second = run_cli(args);
        CHECK(first.code == second.code);
        CHECK(first.out == second.out);
    }
}

TEST_CASE("closure output re-parses to the same automorphism") {
    const RunResult r = run_cli({"closure", "--preset", "A", "--p", "2", "--n", "3",
                                 "--omega", "1", "--generator", "3"});
    REQUIRE(r.code == 0);
    const MealyAutomaton machine = MealyAutomaton::parse(r.out);

    const GroupSpecFile file = parse_group_spec_file("preset = A\np = 2\nn = 3\nomega = \"1\"\n");
    const TreeAutomorphism original = group_generators(file.spec)[3];
    const TreeAutomorphism reparsed =
        from_automaton(std::make_shared<const MealyAutomaton>(machine));
    CHECK(equals_exact(reparsed, original).is_equal());
}

TEST_CASE("exit codes distinguish input errors") {
    CHECK(run_cli({"volume", "--family", "nope"}).code == 2);
    CHECK(run_cli({"level-order", "--preset", "A", "--p", "4", "--n", "3", "--omega", "1"})
              .code == 2);
    CHECK(run_cli({"folner", "--cyclic", "12", "--gens", "1,11", "--eps", "0"}).code == 2);
    CHECK(run_cli({"kesten", "--cyclic", "4", "--measure", "1:1"}).code == 2); // asymmetric
    CHECK(run_cli({"definitely-not-a-subcommand"}).code == 2);
}

TEST_CASE("cap exhaustion surfaces as exit code 3") {
    const RunResult r = run_cli({"closure", "--cap", "2", "--preset", "A", "--p", "2", "--n",
                                 "3", "--omega", "1", "--generator", "3"});
    CHECK(r.code == 3);
}

TEST_CASE("ARBOREAL_CAP environment override") {
    setenv("ARBOREAL_CAP", "2", 1);
    const RunResult capped = run_cli({"closure", "--preset", "A", "--p", "2", "--n", "3",
                                      "--omega", "1", "--generator", "3"});
    CHECK(capped.code == 3);
    setenv("ARBOREAL_CAP", "junk", 1);
    CHECK(run_cli({"volume", "--family", "prop6", "--p", "2", "--n", "3", "--set", "1"}).code ==
          2);
    unsetenv("ARBOREAL_CAP");
    const RunResult fine = run_cli({"closure", "--preset", "A", "--p", "2", "--n", "3",
                                    "--omega", "1", "--generator", "3"});
    CHECK(fine.code == 0);
}

TEST_CASE("group spec files") {
    const std::string text = "# example spec\n"
                             "preset = M\n"
                             "p = 2\n"
                             "n = 3\n"
                             "omega = \"1\"\n"
                             "omega = \"2;1\"\n"
                             "analysis = level-order 1\n";
    const GroupSpecFile file = parse_group_spec_file(text);
    CHECK(file.spec.preset == PresetTag::M);
    CHECK(group_generators(file.spec).size() == 18);
    CHECK(file.requested_level() == 1);

    TempFile tmp(text);
    const RunResult r = run_cli({"level-order", "--spec", tmp.path});
    CHECK(r.code == 0);
    CHECK(r.out.find("order 1344\n") != std::string::npos);

    CHECK_THROWS_AS(parse_group_spec_file("preset = A\np = 2\nn = 3\nomega = \"1\"\nfoo = 1\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_group_spec_file("p = 2\nn = 3\n"), ParseError);
    CHECK_THROWS_AS(
        parse_group_spec_file("preset = A\np = 2\nn = 3\nomega = \"1\"\nanalysis = nope\n"),
        ParseError);
}

TEST_CASE("custom generator lists in spec files") {
    const std::string text =
        "preset = custom\n"
        "p = 2\n"
        "n = 1\n"
        "generator = padic A = [[1]] b = [1]\n"
        "generator = tilde omega = \"1\" padic A = [[1]] b = [1]\n";
    const GroupSpecFile file = parse_group_spec_file(text);
    CHECK(file.spec.generators.size() == 2);
    CHECK(file.spec.generators[0].kind() == BackendKind::Affine);
    CHECK(file.spec.generators[1].kind() == BackendKind::Omega);
}

TEST_CASE("finite group files") {
    CHECK(parse_finite_group("cyclic 12").size() == 12);
    CHECK(parse_finite_group("table 2\n0 1\n1 0\n").size() == 2);
    CHECK(parse_finite_group("perm-group\nperm 1 0 2\nperm 0 2 1\n").size() == 6);
    CHECK_THROWS_AS(parse_finite_group("weird 3"), ParseError);

    TempFile tmp("perm-group\nperm 1 2 3 0\n");
    const RunResult r = run_cli({"folner", "--group", tmp.path, "--gens", "1,3", "--eps", "1"});
    CHECK(r.code == 0);
    CHECK(r.out == "2\n");
}

TEST_CASE("automaton file input for volume and activity") {
    const RunResult closure = run_cli({"closure", "--odometer", "--p", "2", "--n", "1"});
    REQUIRE(closure.code == 0);
    TempFile tmp(closure.out);
    const RunResult vol = run_cli({"volume", "--automaton", tmp.path});
    CHECK(vol.code == 0);
    CHECK(vol.out == "1\n");
    const RunResult act = run_cli({"activity", "--automaton", tmp.path});
    CHECK(act.code == 0);
    CHECK(act.out == "class Bounded\n");
}

TEST_CASE("measure literals") {
    const RationalMeasure mu = parse_measure("0:1/2 3:1/4 5:1/4");
    CHECK(mu.support_size() == 3);
    CHECK(mu.at(0) == Rat(1, 2));
    CHECK_THROWS_AS(parse_measure("0:1/2"), BadParameters); // does not sum to 1
    CHECK_THROWS_AS(parse_measure("nonsense"), ParseError);
}
