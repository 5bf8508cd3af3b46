// Drives the installed CLI binary end to end: exit codes, verdict lines,
// artifact files, and re-parse stability.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef PCSP_CLI_PATH
#error "PCSP_CLI_PATH must point at the CLI binary"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string command = std::string(PCSP_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buffer{};
    RunResult result;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe);
    while (size_t got = fread(buffer.data(), 1, buffer.size(), pipe))
        result.output.append(buffer.data(), got);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string verdict_of(const RunResult& r) {
    std::istringstream in(r.output);
    std::string line, verdict;
    while (std::getline(in, line))
        if (line.rfind(":: verdict=", 0) == 0) verdict = line.substr(11);
    return verdict;
}

// the invariant the CLI promises: exit code and final verdict line agree
void check_consistent(const RunResult& r) {
    const std::string verdict = verdict_of(r);
    switch (r.exit_code) {
        case 0: CHECK(verdict == "yes"); break;
        case 1: CHECK(verdict == "no"); break;
        case 2: CHECK(verdict == "error"); break;
        case 3: CHECK(verdict == "unknown"); break;
        default: FAIL("unexpected exit code ", r.exit_code, " output: ", r.output);
    }
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir(const char* tag) : path(fs::temp_directory_path() / (std::string("pcsp_cli_") + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("construct + witness verify + certify pipeline") {
    TempDir dir("thm2");
    RunResult build = run_cli("construct thm2 --p 7 --out " + dir.path.string());
    CHECK(build.exit_code == 0);
    check_consistent(build);
    CHECK(build.output.find("u 2 4 0 4 2 1 1") != std::string::npos);
    for (const char* name : {"A.structure", "B.structure", "C.structure", "h.map", "U.witness"})
        CHECK(fs::exists(dir.path / name));

    RunResult verify = run_cli("witness verify --a " + dir.file("A.structure") + " --b " +
                               dir.file("B.structure") + " --witness " + dir.file("U.witness"));
    CHECK(verify.exit_code == 0);
    CHECK(verify.output.find(":: witness=valid") != std::string::npos);
    check_consistent(verify);

    RunResult certify = run_cli("certify no-small-sandwich --a " + dir.file("A.structure") +
                                " --b " + dir.file("B.structure") + " --p 7 --witness " +
                                dir.file("U.witness") + " --out " + dir.file("cert.txt"));
    CHECK(certify.exit_code == 0);
    check_consistent(certify);
    std::string cert = slurp(dir.path / "cert.txt");
    CHECK(cert.find("certificate no-small-sandwich") == 0);
    CHECK(cert.find("no-tractable-sandwich below=7") != std::string::npos);

    // artifacts written by the CLI re-serialize byte-stably through it
    TempDir dir2("thm2b");
    RunResult again = run_cli("construct thm2 --p 7 --out " + dir2.path.string());
    CHECK(again.exit_code == 0);
    for (const char* name : {"A.structure", "B.structure", "C.structure", "U.witness"})
        CHECK(slurp(dir.path / name) == slurp(dir2.path / name));
}

TEST_CASE("cyclic-polym on the (2,3) family refutes with 16 candidates") {
    TempDir dir("thm1");
    RunResult build = run_cli("construct thm1 --n 2 --p 3 --out " + dir.path.string());
    CHECK(build.exit_code == 0);
    CHECK(build.output.find("a-size=3 b-size=240 c-size=9") != std::string::npos);

    RunResult cyc = run_cli("cyclic-polym --from " + dir.file("A.structure") + " --to " +
                            dir.file("B.structure") + " --p 3");
    CHECK(cyc.exit_code == 1);
    CHECK(cyc.output.find("RefutedExhaustively (16 candidates)") != std::string::npos);
    check_consistent(cyc);

    RunResult exh = run_cli("certify no-small-sandwich --a " + dir.file("A.structure") +
                            " --b " + dir.file("B.structure") + " --p 3 --exhaustive");
    CHECK(exh.exit_code == 0);
    CHECK(exh.output.find("candidates 16") != std::string::npos);
    check_consistent(exh);
}

TEST_CASE("hom and core subcommands") {
    TempDir dir("graphs");
    std::ofstream(dir.file("c6.structure"))
        << "structure C6\ndomain 6\nrelation E arity 2 size 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\nend\n";
    std::ofstream(dir.file("c3.structure"))
        << "structure C3\ndomain 3\nrelation E arity 2 size 3\n0 1\n1 2\n2 0\nend\n";
    std::ofstream(dir.file("k3.structure"))
        << "structure K3\ndomain 3\nrelation E arity 2 size 6\n0 1\n0 2\n1 0\n1 2\n2 0\n2 1\nend\n";
    std::ofstream(dir.file("k2.structure"))
        << "structure K2\ndomain 2\nrelation E arity 2 size 2\n0 1\n1 0\nend\n";

    RunResult hom = run_cli("hom --from " + dir.file("c6.structure") + " --to " +
                            dir.file("c3.structure"));
    CHECK(hom.exit_code == 0);
    CHECK(hom.output.find("values 0 1 2 0 1 2") != std::string::npos);
    check_consistent(hom);

    RunResult nohom = run_cli("hom --from " + dir.file("k3.structure") + " --to " +
                              dir.file("k2.structure"));
    CHECK(nohom.exit_code == 1);
    check_consistent(nohom);

    // a lone directed cycle is its own core
    RunResult core6 = run_cli("core --in " + dir.file("c6.structure"));
    CHECK(core6.exit_code == 0);
    CHECK(core6.output.find("domain 6") != std::string::npos);
    check_consistent(core6);

    std::ofstream(dir.file("c3c6.structure"))
        << "structure U\ndomain 9\nrelation E arity 2 size 9\n"
           "0 1\n1 2\n2 0\n3 4\n4 5\n5 6\n6 7\n7 8\n8 3\nend\n";
    RunResult core = run_cli("core --in " + dir.file("c3c6.structure"));
    CHECK(core.exit_code == 0);
    CHECK(core.output.find("domain 3") != std::string::npos);
    CHECK(core.output.find(":: vertices 0 1 2") != std::string::npos);
    check_consistent(core);
}

TEST_CASE("solve affine and the pcsp decider") {
    TempDir dir("affine");
    RunResult build = run_cli("construct thm2 --p 7 --out " + dir.path.string());
    REQUIRE(build.exit_code == 0);
    std::ofstream(dir.file("sat.instance"))
        << "instance one\nvariables 3\nconstraint R 0 1 2\nend\n";
    std::ofstream(dir.file("unsat.instance"))
        << "instance diag\nvariables 1\nconstraint R 0 0 0\nend\n";

    RunResult sat = run_cli("solve affine --structure " + dir.file("C.structure") +
                            " --instance " + dir.file("sat.instance"));
    CHECK(sat.exit_code == 0);
    CHECK(sat.output.find(":: assignment") != std::string::npos);
    check_consistent(sat);

    RunResult unsat = run_cli("solve affine --structure " + dir.file("C.structure") +
                              " --instance " + dir.file("unsat.instance"));
    CHECK(unsat.exit_code == 1);
    check_consistent(unsat);

    RunResult yes = run_cli("pcsp --a " + dir.file("A.structure") + " --b " +
                            dir.file("B.structure") + " --via " + dir.file("C.structure") +
                            " --instance " + dir.file("sat.instance"));
    CHECK(yes.exit_code == 0);
    CHECK(yes.output.find(":: answer=yes") != std::string::npos);
    check_consistent(yes);

    RunResult no = run_cli("pcsp --a " + dir.file("A.structure") + " --b " +
                           dir.file("B.structure") + " --via " + dir.file("C.structure") +
                           " --instance " + dir.file("unsat.instance"));
    CHECK(no.exit_code == 1);
    check_consistent(no);
}

TEST_CASE("verify subcommands") {
    RunResult l32 = run_cli("verify lemma32 --n 2 --p 3");
    CHECK(l32.exit_code == 0);
    CHECK(l32.output.find(":: claim=lemma32.1") != std::string::npos);
    check_consistent(l32);

    RunResult skip = run_cli("verify lemma32 --n 2 --p 4");
    CHECK(skip.exit_code == 0); // hypothesis skip is not a failure
    CHECK(skip.output.find("status=skipped") != std::string::npos);

    RunResult claims7 = run_cli("verify thm2-claims --p 7");
    CHECK(claims7.exit_code == 0);
    check_consistent(claims7);

    RunResult claims3 = run_cli("verify thm2-claims --p 3");
    CHECK(claims3.exit_code == 1);
    CHECK(claims3.output.find("status=fails") != std::string::npos);
    check_consistent(claims3);

    RunResult t31 = run_cli("verify thm31 --n 2 --p 3");
    CHECK(t31.exit_code == 0);
    check_consistent(t31);

    TempDir dir("lemma41");
    std::ofstream(dir.file("k2.structure"))
        << "structure K2\ndomain 2\nrelation E arity 2 size 2\n0 1\n1 0\nend\n";
    std::ofstream(dir.file("k3.structure"))
        << "structure K3\ndomain 3\nrelation E arity 2 size 6\n0 1\n0 2\n1 0\n1 2\n2 0\n2 1\nend\n";
    std::ofstream(dir.file("inc.map")) << "map i\nsource 2\ntarget 3\nvalues 0 1\nend\n";
    RunResult l41 = run_cli("verify lemma41 --a " + dir.file("k2.structure") + " --c " +
                            dir.file("k3.structure") + " --map " + dir.file("inc.map"));
    CHECK(l41.exit_code == 0);
    check_consistent(l41);
}

TEST_CASE("graph and digraph subcommands") {
    TempDir dir("dg");
    std::ofstream(dir.file("k2.structure"))
        << "structure K2\ndomain 2\nrelation E arity 2 size 2\n0 1\n1 0\nend\n";
    std::ofstream(dir.file("k3.structure"))
        << "structure K3\ndomain 3\nrelation E arity 2 size 6\n0 1\n0 2\n1 0\n1 2\n2 0\n2 1\nend\n";
    std::ofstream(dir.file("c3c6.structure"))
        << "structure U\ndomain 9\nrelation E arity 2 size 9\n"
           "0 1\n1 2\n2 0\n3 4\n4 5\n5 6\n6 7\n7 8\n8 3\nend\n";
    std::ofstream(dir.file("path.structure"))
        << "structure P\ndomain 4\nrelation E arity 2 size 3\n0 1\n1 2\n2 3\nend\n";
    std::ofstream(dir.file("c3.structure"))
        << "structure C3\ndomain 3\nrelation E arity 2 size 3\n0 1\n1 2\n2 0\nend\n";
    std::ofstream(dir.file("c6.structure"))
        << "structure C6\ndomain 6\nrelation E arity 2 size 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\nend\n";

    RunResult g1 = run_cli("graph classify --in " + dir.file("k2.structure"));
    CHECK(g1.exit_code == 0);
    CHECK(g1.output.find("verdict=in-P") != std::string::npos);
    check_consistent(g1);

    RunResult g2 = run_cli("graph classify --in " + dir.file("k3.structure"));
    CHECK(g2.exit_code == 1);
    CHECK(g2.output.find("verdict=NP-complete") != std::string::npos);
    check_consistent(g2);

    RunResult sp = run_cli("digraph smooth-part --in " + dir.file("path.structure"));
    CHECK(sp.exit_code == 0);
    CHECK(sp.output.find("domain 0") != std::string::npos);
    check_consistent(sp);

    RunResult cls = run_cli("digraph classify --in " + dir.file("c3c6.structure"));
    CHECK(cls.exit_code == 0);
    CHECK(cls.output.find("reason=cycle-union-core") != std::string::npos);
    CHECK(cls.output.find("core-vertices=0,1,2") != std::string::npos);
    check_consistent(cls);

    RunResult solve = run_cli("digraph solve-cycles --in " + dir.file("c6.structure") +
                              " --target " + dir.file("c3.structure"));
    CHECK(solve.exit_code == 0);
    check_consistent(solve);

    RunResult nosolve = run_cli("digraph solve-cycles --in " + dir.file("c3.structure") +
                                " --target " + dir.file("c6.structure"));
    CHECK(nosolve.exit_code == 1);
    check_consistent(nosolve);
}

TEST_CASE("error and budget exit codes") {
    RunResult missing = run_cli("hom --from /nonexistent.structure --to /nonexistent.structure");
    CHECK(missing.exit_code == 2);
    check_consistent(missing);

    TempDir dir("bad");
    std::ofstream(dir.file("bad.structure")) << "structure oops\ndomain -3\nend\n";
    RunResult malformed = run_cli("core --in " + dir.file("bad.structure"));
    CHECK(malformed.exit_code == 2);
    check_consistent(malformed);

    RunResult usage = run_cli("definitely-not-a-subcommand");
    CHECK(usage.exit_code == 2);

    RunResult build = run_cli("construct thm2 --p 7 --out " + dir.path.string());
    REQUIRE(build.exit_code == 0);
    RunResult unknown = run_cli("--budget 20000 cyclic-polym --from " + dir.file("A.structure") +
                                " --to " + dir.file("B.structure") + " --p 7");
    CHECK(unknown.exit_code == 3);
    check_consistent(unknown);

    RunResult nonprime = run_cli("cyclic-polym --from " + dir.file("A.structure") + " --to " +
                                 dir.file("B.structure") + " --p 4");
    CHECK(nonprime.exit_code == 2);
    check_consistent(nonprime);
}
