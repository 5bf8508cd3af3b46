// Command-line front end. Links the C API only; all machine-readable output
// lines are prefixed with ":: " and the final ":: verdict=..." line always
// matches the exit code (0 yes, 1 no, 2 error, 3 unknown).

#include "pcsp.h"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

template <typename T, void (*Free)(T*)>
class Handle {
  public:
    Handle() = default;
    explicit Handle(T* p) : ptr_(p) {}
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    Handle(Handle&& o) noexcept : ptr_(o.release()) {}
    ~Handle() {
        if (ptr_) Free(ptr_);
    }
    T* get() const { return ptr_; }
    T** slot() { return &ptr_; }
    T* release() {
        T* p = ptr_;
        ptr_ = nullptr;
        return p;
    }
    explicit operator bool() const { return ptr_ != nullptr; }

  private:
    T* ptr_ = nullptr;
};

using StructureHandle = Handle<pcsp_structure, pcsp_structure_free>;
using InstanceHandle = Handle<pcsp_instance, pcsp_instance_free>;
using WitnessHandle = Handle<pcsp_witness, pcsp_witness_free>;
using MapHandle = Handle<pcsp_map, pcsp_map_free>;
using Thm1Handle = Handle<pcsp_thm1, pcsp_thm1_free>;
using Thm2Handle = Handle<pcsp_thm2, pcsp_thm2_free>;

class CString {
  public:
    CString() = default;
    ~CString() { pcsp_string_free(ptr_); }
    CString(const CString&) = delete;
    CString& operator=(const CString&) = delete;
    char** slot() { return &ptr_; }
    std::string str() const { return ptr_ ? std::string(ptr_) : std::string(); }
    bool empty() const { return !ptr_ || !*ptr_; }

  private:
    char* ptr_ = nullptr;
};

const char* verdict_word(int status) {
    switch (status) {
        case PCSP_YES: return "yes";
        case PCSP_NO: return "no";
        case PCSP_UNKNOWN: return "unknown";
        default: return "error";
    }
}

int finish(int status) {
    if (status == PCSP_ERR) {
        const char* why = pcsp_last_error();
        if (why && *why) std::cout << "error: " << why << "\n";
    }
    std::cout << ":: verdict=" << verdict_word(status) << std::endl;
    return status;
}

std::optional<std::string> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool spill(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << text;
    return static_cast<bool>(out);
}

StructureHandle load_structure(const std::string& path, int& status) {
    auto text = slurp(path);
    if (!text) {
        std::cout << "error: cannot open " << path << "\n";
        status = PCSP_ERR;
        return StructureHandle();
    }
    StructureHandle h(pcsp_structure_parse(text->c_str()));
    if (!h) {
        std::cout << "error: " << path << ": " << pcsp_last_error() << "\n";
        status = PCSP_ERR;
    }
    return h;
}

InstanceHandle load_instance(const std::string& path, int& status) {
    auto text = slurp(path);
    if (!text) {
        std::cout << "error: cannot open " << path << "\n";
        status = PCSP_ERR;
        return InstanceHandle();
    }
    InstanceHandle h(pcsp_instance_parse(text->c_str()));
    if (!h) {
        std::cout << "error: " << path << ": " << pcsp_last_error() << "\n";
        status = PCSP_ERR;
    }
    return h;
}

WitnessHandle load_witness(const std::string& path, int& status) {
    auto text = slurp(path);
    if (!text) {
        std::cout << "error: cannot open " << path << "\n";
        status = PCSP_ERR;
        return WitnessHandle();
    }
    WitnessHandle h(pcsp_witness_parse(text->c_str()));
    if (!h) {
        std::cout << "error: " << path << ": " << pcsp_last_error() << "\n";
        status = PCSP_ERR;
    }
    return h;
}

MapHandle load_map(const std::string& path, int& status) {
    auto text = slurp(path);
    if (!text) {
        std::cout << "error: cannot open " << path << "\n";
        status = PCSP_ERR;
        return MapHandle();
    }
    MapHandle h(pcsp_map_parse(text->c_str()));
    if (!h) {
        std::cout << "error: " << path << ": " << pcsp_last_error() << "\n";
        status = PCSP_ERR;
    }
    return h;
}

// Serialized artifact either lands in out_dir/name or on stdout.
bool emit_artifact(const std::string& out_dir, const std::string& name,
                   const std::string& text) {
    if (out_dir.empty()) {
        std::cout << text;
        return true;
    }
    std::filesystem::create_directories(out_dir);
    std::string path = (std::filesystem::path(out_dir) / name).string();
    if (!spill(path, text)) {
        std::cout << "error: cannot write " << path << "\n";
        return false;
    }
    std::cout << "wrote " << path << "\n";
    return true;
}

// plain-text lines go out bare; machine lines (starting "claim=") carry the
// ":: " prefix
void print_report(const std::string& report) {
    std::istringstream in(report);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("claim=", 0) == 0)
            std::cout << ":: " << line << "\n";
        else
            std::cout << line << "\n";
    }
}

int run_construct_thm1(int n, int p, long long materialize, const std::string& out_dir) {
    Thm1Handle bundle(pcsp_thm1_build(n, p, materialize));
    if (!bundle) return finish(PCSP_ERR);
    const char names[3] = {'A', 'B', 'C'};
    long long sizes[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i) {
        StructureHandle s(pcsp_thm1_structure(bundle.get(), names[i]));
        if (!s) return finish(PCSP_ERR);
        sizes[i] = pcsp_structure_relation_size(s.get(), 0);
        CString text;
        if (pcsp_structure_serialize(s.get(), text.slot()) != PCSP_YES) return finish(PCSP_ERR);
        if (!emit_artifact(out_dir, std::string(1, names[i]) + ".structure", text.str()))
            return finish(PCSP_ERR);
    }
    for (char which : {'g', 'h'}) {
        MapHandle m(pcsp_thm1_map(bundle.get(), which));
        if (!m) return finish(PCSP_ERR);
        CString text;
        if (pcsp_map_serialize(m.get(), text.slot()) != PCSP_YES) return finish(PCSP_ERR);
        if (!emit_artifact(out_dir, std::string(1, which) + ".map", text.str()))
            return finish(PCSP_ERR);
    }
    std::cout << ":: built=thm1 n=" << n << " p=" << p << " a-size=" << sizes[0]
              << " b-size=" << sizes[1] << " c-size=" << sizes[2] << "\n";
    return finish(PCSP_YES);
}

int run_construct_thm2(int p, bool allow_small, const std::string& out_dir) {
    Thm2Handle bundle(pcsp_thm2_build(p, allow_small ? 1 : 0));
    if (!bundle) return finish(PCSP_ERR);
    const char names[3] = {'A', 'B', 'C'};
    long long sizes[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i) {
        StructureHandle s(pcsp_thm2_structure(bundle.get(), names[i]));
        if (!s) return finish(PCSP_ERR);
        sizes[i] = pcsp_structure_relation_size(s.get(), 0);
        CString text;
        if (pcsp_structure_serialize(s.get(), text.slot()) != PCSP_YES) return finish(PCSP_ERR);
        if (!emit_artifact(out_dir, std::string(1, names[i]) + ".structure", text.str()))
            return finish(PCSP_ERR);
    }
    {
        MapHandle m(pcsp_thm2_map(bundle.get()));
        if (!m) return finish(PCSP_ERR);
        CString text;
        if (pcsp_map_serialize(m.get(), text.slot()) != PCSP_YES) return finish(PCSP_ERR);
        if (!emit_artifact(out_dir, "h.map", text.str())) return finish(PCSP_ERR);
    }
    {
        WitnessHandle w(pcsp_thm2_witness(bundle.get()));
        if (!w) return finish(PCSP_ERR);
        CString text;
        if (pcsp_witness_serialize(w.get(), text.slot()) != PCSP_YES) return finish(PCSP_ERR);
        if (!emit_artifact(out_dir, "U.witness", text.str())) return finish(PCSP_ERR);
    }
    CString uline;
    if (pcsp_thm2_u(bundle.get(), uline.slot()) != PCSP_YES) return finish(PCSP_ERR);
    std::cout << ":: built=thm2 p=" << p << " a-size=" << sizes[0] << " b-size=" << sizes[1]
              << " c-size=" << sizes[2] << " " << uline.str() << "\n";
    return finish(PCSP_YES);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"promise-CSP sandwich toolkit"};
    app.require_subcommand(1);
    std::function<int()> action;

    long long budget = 0; // 0 = library default (PCSP_BUDGET env or built-in)
    app.add_option("--budget", budget, "node/tuple budget for exponential searches");

    // construct thm1 / thm2
    auto* construct = app.add_subcommand("construct", "build the example families");
    construct->require_subcommand(1);
    {
        auto* thm1 = construct->add_subcommand("thm1", "arity-n^p projection family");
        auto n = std::make_shared<int>(2);
        auto p = std::make_shared<int>(3);
        auto materialize = std::make_shared<long long>(1'000'000);
        auto out_dir = std::make_shared<std::string>();
        thm1->add_option("--n", *n, "domain size n")->required();
        thm1->add_option("--p", *p, "arity parameter p")->required();
        thm1->add_option("--materialize", *materialize, "tuple-count threshold");
        thm1->add_option("--out", *out_dir, "output directory (default: stdout)");
        thm1->callback([=, &action] {
            action = [=] { return run_construct_thm1(*n, *p, *materialize, *out_dir); };
        });
    }
    {
        auto* thm2 = construct->add_subcommand("thm2", "ternary x-2y+z family");
        auto p = std::make_shared<int>(7);
        auto allow_small = std::make_shared<bool>(false);
        auto out_dir = std::make_shared<std::string>();
        thm2->add_option("--p", *p, "prime p >= 7")->required();
        thm2->add_flag("--allow-small", *allow_small, "permit p in {3,5} for negative tests");
        thm2->add_option("--out", *out_dir, "output directory (default: stdout)");
        thm2->callback([=, &action] {
            action = [=] { return run_construct_thm2(*p, *allow_small, *out_dir); };
        });
    }

    // hom
    {
        auto* hom = app.add_subcommand("hom", "find a homomorphism between structures");
        auto from = std::make_shared<std::string>();
        auto to = std::make_shared<std::string>();
        hom->add_option("--from", *from, "source structure file")->required();
        hom->add_option("--to", *to, "target structure file")->required();
        hom->callback([=, &action, &budget] {
            action = [=, &budget] {
                int status = PCSP_YES;
                StructureHandle a = load_structure(*from, status);
                if (!a) return finish(status);
                StructureHandle b = load_structure(*to, status);
                if (!b) return finish(status);
                MapHandle found;
                int rc = pcsp_find_homomorphism(a.get(), b.get(), budget, found.slot());
                if (rc == PCSP_YES) {
                    CString text;
                    if (pcsp_map_serialize(found.get(), text.slot()) != PCSP_YES)
                        return finish(PCSP_ERR);
                    std::cout << text.str();
                }
                return finish(rc);
            };
        });
    }

    // core
    {
        auto* core = app.add_subcommand("core", "compute the core of a structure");
        auto in = std::make_shared<std::string>();
        core->add_option("--in", *in, "structure file")->required();
        core->callback([=, &action, &budget] {
            action = [=, &budget] {
                int status = PCSP_YES;
                StructureHandle s = load_structure(*in, status);
                if (!s) return finish(status);
                StructureHandle out;
                CString vertices;
                int rc = pcsp_core_of(s.get(), budget, out.slot(), vertices.slot());
                if (rc == PCSP_YES) {
                    CString text;
                    if (pcsp_structure_serialize(out.get(), text.slot()) != PCSP_YES)
                        return finish(PCSP_ERR);
                    std::cout << text.str();
                    std::cout << ":: " << vertices.str() << "\n";
                }
                return finish(rc);
            };
        });
    }

    // cyclic-polym
    {
        auto* cyc = app.add_subcommand("cyclic-polym", "search for a cyclic polymorphism");
        auto from = std::make_shared<std::string>();
        auto to = std::make_shared<std::string>();
        auto p = std::make_shared<int>(0);
        auto allow_nonprime = std::make_shared<bool>(false);
        cyc->add_option("--from", *from, "structure A file")->required();
        cyc->add_option("--to", *to, "structure B file")->required();
        cyc->add_option("--p", *p, "arity (prime)")->required();
        cyc->add_flag("--allow-nonprime", *allow_nonprime, "permit non-prime arity");
        cyc->callback([=, &action, &budget] {
            action = [=, &budget] {
                int status = PCSP_YES;
                StructureHandle a = load_structure(*from, status);
                if (!a) return finish(status);
                StructureHandle b = load_structure(*to, status);
                if (!b) return finish(status);
                CString summary, table;
                int rc = pcsp_find_cyclic_polymorphism(a.get(), b.get(), *p, budget,
                                                       *allow_nonprime ? 1 : 0, summary.slot(),
                                                       table.slot());
                std::string s = summary.str();
                auto grab = [&](const std::string& key) -> std::string {
                    auto pos = s.find(key + "=");
                    if (pos == std::string::npos) return "?";
                    pos += key.size() + 1;
                    return s.substr(pos, s.find(' ', pos) - pos);
                };
                if (rc == PCSP_YES)
                    std::cout << "Found\n" << table.str() << "\n";
                else if (rc == PCSP_NO)
                    std::cout << "RefutedExhaustively (" << grab("candidates")
                              << " candidates)\n";
                else if (rc == PCSP_UNKNOWN)
                    std::cout << "Unknown (budget exhausted after " << grab("nodes")
                              << " nodes)\n";
                if (!summary.empty()) std::cout << ":: " << s << "\n";
                return finish(rc);
            };
        });
    }

    // witness verify
    {
        auto* witness = app.add_subcommand("witness", "obstruction witness operations");
        witness->require_subcommand(1);
        auto* wverify = witness->add_subcommand("verify", "check a witness against A and B");
        auto a = std::make_shared<std::string>();
        auto b = std::make_shared<std::string>();
        auto wfile = std::make_shared<std::string>();
        wverify->add_option("--a", *a, "structure A file")->required();
        wverify->add_option("--b", *b, "structure B file")->required();
        wverify->add_option("--witness", *wfile, "witness file")->required();
        wverify->callback([=, &action, &budget] {
            action = [=, &budget] {
                int status = PCSP_YES;
                StructureHandle sa = load_structure(*a, status);
                if (!sa) return finish(status);
                StructureHandle sb = load_structure(*b, status);
                if (!sb) return finish(status);
                WitnessHandle w = load_witness(*wfile, status);
                if (!w) return finish(status);
                CString reason;
                int rc = pcsp_verify_witness(sa.get(), sb.get(), w.get(), budget, reason.slot());
                std::cout << ":: witness=" << (rc == PCSP_YES ? "valid" : "invalid");
                if (rc != PCSP_YES) std::cout << " reason=\"" << reason.str() << "\"";
                std::cout << "\n";
                return finish(rc);
            };
        });
    }

    // solve affine
    {
        auto* solve = app.add_subcommand("solve", "CSP solvers");
        solve->require_subcommand(1);
        auto* affine = solve->add_subcommand("affine", "linear-algebra solver over Z_p");
        auto structure = std::make_shared<std::string>();
        auto instance = std::make_shared<std::string>();
        affine->add_option("--structure", *structure, "affine structure file")->required();
        affine->add_option("--instance", *instance, "instance file")->required();
        affine->callback([=, &action] {
            action = [=] {
                int status = PCSP_YES;
                StructureHandle c = load_structure(*structure, status);
                if (!c) return finish(status);
                InstanceHandle inst = load_instance(*instance, status);
                if (!inst) return finish(status);
                CString assignment;
                int rc = pcsp_solve_affine(c.get(), inst.get(), assignment.slot());
                if (rc == PCSP_YES) std::cout << ":: " << assignment.str() << "\n";
                return finish(rc);
            };
        });
    }

    // pcsp decider
    {
        auto* decide = app.add_subcommand("pcsp", "decide a PCSP instance via a sandwich");
        auto a = std::make_shared<std::string>();
        auto b = std::make_shared<std::string>();
        auto via = std::make_shared<std::string>();
        auto instance = std::make_shared<std::string>();
        decide->add_option("--a", *a, "structure A file")->required();
        decide->add_option("--b", *b, "structure B file")->required();
        decide->add_option("--via", *via, "sandwiched affine structure file")->required();
        decide->add_option("--instance", *instance, "instance file")->required();
        decide->callback([=, &action, &budget] {
            action = [=, &budget] {
                int status = PCSP_YES;
                StructureHandle sa = load_structure(*a, status);
                if (!sa) return finish(status);
                StructureHandle sb = load_structure(*b, status);
                if (!sb) return finish(status);
                StructureHandle sc = load_structure(*via, status);
                if (!sc) return finish(status);
                InstanceHandle inst = load_instance(*instance, status);
                if (!inst) return finish(status);
                CString detail;
                int rc = pcsp_pcsp_decide(sa.get(), sb.get(), sc.get(), inst.get(), budget,
                                          detail.slot());
                if (rc == PCSP_YES || rc == PCSP_NO)
                    std::cout << ":: answer=" << detail.str() << "\n";
                return finish(rc);
            };
        });
    }

    // verify lemma32 | thm2-claims | thm31 | lemma41
    {
        auto* verify = app.add_subcommand("verify", "brute-force claim oracles");
        verify->require_subcommand(1);
        {
            auto* lemma32 = verify->add_subcommand("lemma32", "cyclic linear table properties");
            auto n = std::make_shared<int>(0);
            auto p = std::make_shared<int>(0);
            lemma32->add_option("--n", *n)->required();
            lemma32->add_option("--p", *p)->required();
            lemma32->callback([=, &action, &budget] {
                action = [=, &budget] {
                    CString report;
                    int rc = pcsp_verify_lemma32(*n, *p, budget, report.slot());
                    print_report(report.str());
                    return finish(rc);
                };
            });
        }
        {
            auto* claims = verify->add_subcommand("thm2-claims", "ternary family facts");
            auto p = std::make_shared<int>(0);
            claims->add_option("--p", *p)->required();
            claims->callback([=, &action] {
                action = [=] {
                    CString report;
                    int rc = pcsp_verify_thm2_claims(*p, report.slot());
                    print_report(report.str());
                    return finish(rc);
                };
            });
        }
        {
            auto* thm31 = verify->add_subcommand("thm31", "sandwich maps are homomorphisms");
            auto n = std::make_shared<int>(0);
            auto p = std::make_shared<int>(0);
            thm31->add_option("--n", *n)->required();
            thm31->add_option("--p", *p)->required();
            thm31->callback([=, &action, &budget] {
                action = [=, &budget] {
                    CString report;
                    int rc = pcsp_verify_thm31(*n, *p, budget, report.slot());
                    print_report(report.str());
                    return finish(rc);
                };
            });
        }
        {
            auto* lemma41 = verify->add_subcommand("lemma41", "symmetric image containment");
            auto a = std::make_shared<std::string>();
            auto c = std::make_shared<std::string>();
            auto map = std::make_shared<std::string>();
            lemma41->add_option("--a", *a, "symmetric structure A file")->required();
            lemma41->add_option("--c", *c, "structure C file")->required();
            lemma41->add_option("--map", *map, "homomorphism file")->required();
            lemma41->callback([=, &action] {
                action = [=] {
                    int status = PCSP_YES;
                    StructureHandle sa = load_structure(*a, status);
                    if (!sa) return finish(status);
                    StructureHandle sc = load_structure(*c, status);
                    if (!sc) return finish(status);
                    MapHandle g = load_map(*map, status);
                    if (!g) return finish(status);
                    CString report;
                    int rc = pcsp_verify_lemma41(sa.get(), sc.get(), g.get(), report.slot());
                    print_report(report.str());
                    return finish(rc);
                };
            });
        }
    }

    // certify no-small-sandwich
    {
        auto* certify = app.add_subcommand("certify", "emit machine-checkable certificates");
        certify->require_subcommand(1);
        auto* nss = certify->add_subcommand("no-small-sandwich",
                                            "no tractable sandwich below size p");
        auto a = std::make_shared<std::string>();
        auto b = std::make_shared<std::string>();
        auto p = std::make_shared<int>(0);
        auto wfile = std::make_shared<std::string>();
        auto exhaustive = std::make_shared<bool>(false);
        auto out = std::make_shared<std::string>();
        nss->add_option("--a", *a, "structure A file")->required();
        nss->add_option("--b", *b, "structure B file")->required();
        nss->add_option("--p", *p, "prime p")->required();
        auto* wopt = nss->add_option("--witness", *wfile, "obstruction witness file");
        auto* eopt = nss->add_flag("--exhaustive", *exhaustive, "refute by exhaustive search");
        wopt->excludes(eopt);
        nss->add_option("--out", *out, "certificate output file (default: stdout)");
        nss->callback([=, &action, &budget] {
            action = [=, &budget] {
                int status = PCSP_YES;
                StructureHandle sa = load_structure(*a, status);
                if (!sa) return finish(status);
                StructureHandle sb = load_structure(*b, status);
                if (!sb) return finish(status);
                CString cert;
                int rc;
                if (!wfile->empty()) {
                    WitnessHandle w = load_witness(*wfile, status);
                    if (!w) return finish(status);
                    rc = pcsp_certify_with_witness(sa.get(), sb.get(), *p, w.get(), budget,
                                                   cert.slot());
                } else if (*exhaustive) {
                    rc = pcsp_certify_exhaustive(sa.get(), sb.get(), *p, budget, cert.slot());
                } else {
                    std::cout << "error: pass --witness FILE or --exhaustive\n";
                    return finish(PCSP_ERR);
                }
                if (rc == PCSP_YES) {
                    if (out->empty()) {
                        std::cout << cert.str();
                    } else if (!spill(*out, cert.str())) {
                        std::cout << "error: cannot write " << *out << "\n";
                        return finish(PCSP_ERR);
                    } else {
                        std::cout << "wrote " << *out << "\n";
                    }
                    std::cout << ":: certificate=no-small-sandwich p=" << *p << "\n";
                }
                return finish(rc);
            };
        });
    }

    // graph classify
    {
        auto* graph = app.add_subcommand("graph", "symmetric graph procedures");
        graph->require_subcommand(1);
        auto* classify = graph->add_subcommand("classify", "Hell-Nesetril dichotomy");
        auto in = std::make_shared<std::string>();
        classify->add_option("--in", *in, "graph structure file")->required();
        classify->callback([=, &action] {
            action = [=] {
                int status = PCSP_YES;
                StructureHandle g = load_structure(*in, status);
                if (!g) return finish(status);
                CString detail;
                int rc = pcsp_graph_classify(g.get(), detail.slot());
                if (!detail.empty()) std::cout << ":: " << detail.str() << "\n";
                return finish(rc);
            };
        });
    }

    // digraph smooth-part | classify | solve-cycles
    {
        auto* digraph = app.add_subcommand("digraph", "directed graph procedures");
        digraph->require_subcommand(1);
        {
            auto* smooth = digraph->add_subcommand("smooth-part", "maximal smooth subgraph");
            auto in = std::make_shared<std::string>();
            auto out = std::make_shared<std::string>();
            smooth->add_option("--in", *in, "digraph structure file")->required();
            smooth->add_option("--out", *out, "write the subgraph here (default: stdout)");
            smooth->callback([=, &action] {
                action = [=] {
                    int status = PCSP_YES;
                    StructureHandle g = load_structure(*in, status);
                    if (!g) return finish(status);
                    StructureHandle sub;
                    CString vertices;
                    int rc = pcsp_digraph_smooth_part(g.get(), sub.slot(), vertices.slot());
                    if (rc != PCSP_YES) return finish(rc);
                    CString text;
                    if (pcsp_structure_serialize(sub.get(), text.slot()) != PCSP_YES)
                        return finish(PCSP_ERR);
                    if (out->empty()) {
                        std::cout << text.str();
                    } else if (!spill(*out, text.str())) {
                        std::cout << "error: cannot write " << *out << "\n";
                        return finish(PCSP_ERR);
                    } else {
                        std::cout << "wrote " << *out << "\n";
                    }
                    std::cout << ":: " << vertices.str() << "\n";
                    return finish(rc);
                };
            });
        }
        {
            auto* classify = digraph->add_subcommand("classify", "smooth digraph dichotomy");
            auto in = std::make_shared<std::string>();
            classify->add_option("--in", *in, "smooth digraph structure file")->required();
            classify->callback([=, &action, &budget] {
                action = [=, &budget] {
                    int status = PCSP_YES;
                    StructureHandle g = load_structure(*in, status);
                    if (!g) return finish(status);
                    CString detail;
                    int rc = pcsp_digraph_classify(g.get(), budget, detail.slot());
                    if (!detail.empty()) std::cout << ":: " << detail.str() << "\n";
                    return finish(rc);
                };
            });
        }
        {
            auto* cycles = digraph->add_subcommand("solve-cycles",
                                                   "CSP over a disjoint union of cycles");
            auto in = std::make_shared<std::string>();
            auto target = std::make_shared<std::string>();
            cycles->add_option("--in", *in, "instance digraph file")->required();
            cycles->add_option("--target", *target, "target cycle-union digraph file")
                ->required();
            cycles->callback([=, &action] {
                action = [=] {
                    int status = PCSP_YES;
                    StructureHandle t = load_structure(*target, status);
                    if (!t) return finish(status);
                    StructureHandle x = load_structure(*in, status);
                    if (!x) return finish(status);
                    MapHandle hom;
                    int rc = pcsp_digraph_solve_cycles(t.get(), x.get(), hom.slot());
                    if (rc == PCSP_YES && hom) {
                        CString text;
                        if (pcsp_map_serialize(hom.get(), text.slot()) != PCSP_YES)
                            return finish(PCSP_ERR);
                        std::cout << text.str();
                    }
                    return finish(rc);
                };
            });
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : PCSP_ERR;
    }
    if (!action) {
        std::cout << app.help();
        return PCSP_ERR;
    }
    return action();
}
