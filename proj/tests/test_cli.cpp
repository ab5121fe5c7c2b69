#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "retra/cli.hpp"
#include "retra/io.hpp"

using namespace retra;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    int code = run_cli(args, out, err);
    return CliResult{code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    std::filesystem::path dir = std::filesystem::temp_directory_path() / "retra-cli-tests";
    std::filesystem::create_directories(dir);
    std::filesystem::path path = dir / name;
    std::ofstream file(path);
    file << content;
    return path;
}

}  // namespace

TEST_CASE("check decides properties with exit codes") {
    auto glue = temp_file("glue.aut", save_automaton(fixtures::a_glue()));
    auto bad = temp_file("bad.aut", save_automaton(fixtures::a_bad()));

    CliResult boolean = cli({"check", glue.string(), "--property", "boolean"});
    CHECK(boolean.code == 0);
    CHECK(boolean.out.find("yes") != std::string::npos);

    CliResult retractable = cli({"check", bad.string(), "--property", "retractable"});
    CHECK(retractable.code == 1);
    CHECK(retractable.out.find("witness: {b,c}") != std::string::npos);

    CHECK(cli({"check", glue.string(), "--property", "semi-connected"}).code == 0);
    CliResult kern = cli({"check", glue.string(), "--property", "kernel"});
    CHECK(kern.code == 0);
    CHECK(kern.out.find("{k}") != std::string::npos);
    CHECK(cli({"check", bad.string(), "--property", "kernel"}).code == 1);
}

TEST_CASE("errors surface a machine-readable code and exit 2") {
    CliResult missing = cli({"check", "/nonexistent/file.aut", "--property", "boolean"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("error[parse]") != std::string::npos);

    auto mangled = temp_file("mangled.aut", "states a\ninputs x\ntrans a x a\ntrans a x a\n");
    CliResult dup = cli({"analyze", mangled.string()});
    CHECK(dup.code == 2);
    CHECK(dup.err.find("error[parse]") != std::string::npos);
    CHECK(dup.err.find(":4:") != std::string::npos);

    CliResult usage = cli({"check", "--property", "boolean"});
    CHECK(usage.code == 2);
    CHECK(usage.err.find("error[usage]") != std::string::npos);

    CliResult unknown = cli({"frobnicate"});
    CHECK(unknown.code == 2);
}

TEST_CASE("analyze and decompose print the structure") {
    auto bad = temp_file("bad2.aut", save_automaton(fixtures::a_bad()));
    CliResult analyzed = cli({"analyze", bad.string()});
    CHECK(analyzed.code == 0);
    CHECK(analyzed.out.find("direct-sum components: 2") != std::string::npos);
    CHECK(analyzed.out.find("semi-connected: yes") != std::string::npos);

    auto tails = temp_file("tails.aut", save_automaton(fixtures::two_tails()));
    CliResult not_semi = cli({"analyze", tails.string()});
    CHECK(not_semi.out.find("semi-connected: no") != std::string::npos);

    CliResult decomposed = cli({"decompose", bad.string()});
    CHECK(decomposed.code == 0);
    CHECK(decomposed.out.find("components: 2") != std::string::npos);
    CHECK(decomposed.out.find("kernel: {b,c}") != std::string::npos);
}

TEST_CASE("congruences lists the lattice and writes the Hasse diagram") {
    auto glue = temp_file("glue2.aut", save_automaton(fixtures::a_glue()));
    auto hasse = std::filesystem::temp_directory_path() / "retra-cli-tests" / "glue.dot";
    CliResult listed = cli({"congruences", glue.string(), "--hasse", hasse.string()});
    CHECK(listed.code == 0);
    CHECK(listed.out.find("congruences: 3") != std::string::npos);
    CHECK(listed.out.find("boolean-algebra: no") != std::string::npos);
    std::ifstream dot(hasse);
    std::stringstream content;
    content << dot.rdbuf();
    CHECK(content.str().find("digraph congruence_lattice") != std::string::npos);
}

TEST_CASE("construct and recover round trip through files") {
    auto spec_path = temp_file("chain.spec", save_spec(fixtures::s0()));
    auto built_path = std::filesystem::temp_directory_path() / "retra-cli-tests" / "built.aut";

    CliResult built = cli({"construct", spec_path.string(), "-o", built_path.string()});
    CHECK(built.code == 0);
    CHECK(cli({"check", built_path.string(), "--property", "semi-connected"}).code == 0);
    CHECK(cli({"check", built_path.string(), "--property", "boolean"}).code == 0);

    auto recovered_path =
        std::filesystem::temp_directory_path() / "retra-cli-tests" / "recovered.spec";
    CliResult recovered = cli({"recover", built_path.string(), "-o", recovered_path.string()});
    CHECK(recovered.code == 0);
    ConstructionSpec reloaded = load_spec_file(recovered_path.string());
    CHECK(reloaded.tree.num_nodes() == 2);

    // A non-recoverable automaton exits 1 with the reason.
    auto bad = temp_file("bad3.aut", save_automaton(fixtures::a_bad()));
    auto nowhere = std::filesystem::temp_directory_path() / "retra-cli-tests" / "nowhere.spec";
    CliResult refused = cli({"recover", bad.string(), "-o", nowhere.string()});
    CHECK(refused.code == 1);
    CHECK(refused.out.find("no kernel") != std::string::npos);
}

TEST_CASE("export-dot writes to stdout or a file") {
    auto glue = temp_file("glue3.aut", save_automaton(fixtures::a_glue()));
    CliResult to_stdout = cli({"export-dot", glue.string()});
    CHECK(to_stdout.code == 0);
    CHECK(to_stdout.out.find("digraph automaton") != std::string::npos);
}

TEST_CASE("verify summarizes the statement checks") {
    CliResult small = cli({"verify", "--states", "2", "--inputs", "2"});
    CHECK(small.code == 0);
    CHECK(small.out.find("automata checked: 22") != std::string::npos);
    CHECK(small.out.find("theorem1: checked=22 failed=0") != std::string::npos);

    // Random mode is reproducible from the seed.
    CliResult first = cli({"verify", "--states", "5", "--inputs", "2", "--random", "60",
                           "--seed", "7"});
    CliResult second = cli({"verify", "--states", "5", "--inputs", "2", "--random", "60",
                            "--seed", "7"});
    CHECK(first.code == 0);
    CHECK(first.out == second.out);

    // Tallies are independent of how the work is split.
    CliResult serial = cli({"verify", "--states", "3", "--inputs", "2"});
    CliResult fanned = cli({"verify", "--states", "3", "--inputs", "2", "--jobs", "3"});
    CHECK(serial.out == fanned.out);

    // Budget gate for oversized exhaustive runs.
    CliResult budget = cli({"verify", "--states", "6", "--inputs", "2"});
    CHECK(budget.code == 2);
    CHECK(budget.err.find("error[budget]") != std::string::npos);
}
