#include "pcsp.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "pcsp/affine.hpp"
#include "pcsp/constructions.hpp"
#include "pcsp/digraph.hpp"
#include "pcsp/hom.hpp"
#include "pcsp/io.hpp"
#include "pcsp/structure.hpp"
#include "pcsp/verify.hpp"

struct pcsp_structure {
    pcsp::Structure v;
};
struct pcsp_instance {
    pcsp::CspInstance v;
};
struct pcsp_witness {
    pcsp::ObstructionWitness v;
};
struct pcsp_map {
    pcsp::Homomorphism v;
};
struct pcsp_thm1 {
    pcsp::Thm1Bundle v;
};
struct pcsp_thm2 {
    pcsp::Thm2Bundle v;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void set_out(char** slot, const std::string& s) {
    if (slot) *slot = dup_string(s);
}

std::int64_t pick_budget(long long budget) {
    return budget > 0 ? static_cast<std::int64_t>(budget) : pcsp::default_budget();
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const pcsp::budget_error& e) {
        g_last_error = e.what();
        return PCSP_UNKNOWN;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return PCSP_ERR;
    }
}

template <typename Handle, typename Fn>
Handle* guarded_new(Fn&& fn) {
    try {
        return new Handle{fn()};
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return nullptr;
    }
}

int require(bool ok, const char* message) {
    if (!ok) {
        g_last_error = message;
        return PCSP_ERR;
    }
    return PCSP_YES;
}

// one plain-text line then one machine line per claim; machine lines start
// with "claim=" so callers can tell them apart
std::string join_reports(const std::vector<pcsp::ClaimReport>& reports) {
    std::string out;
    for (const auto& r : reports) {
        out += r.human_line() + "\n";
        out += r.machine_line() + "\n";
    }
    return out;
}

int report_status(const std::vector<pcsp::ClaimReport>& reports) {
    bool budget = false;
    for (const auto& r : reports) {
        if (r.status == pcsp::ClaimStatus::fails) return PCSP_NO;
        if (r.status == pcsp::ClaimStatus::skipped && r.budget_limited) budget = true;
    }
    return budget ? PCSP_UNKNOWN : PCSP_YES;
}

std::string table_line(const pcsp::FunctionTable& t) {
    std::ostringstream os;
    os << "table n=" << t.n << " p=" << t.p << " m=" << t.m << " values";
    for (int v : t.values) os << ' ' << v;
    return os.str();
}

std::string search_summary(const pcsp::PolymorphismSearch& s) {
    std::ostringstream os;
    switch (s.outcome) {
        case pcsp::Outcome::found: os << "outcome=found"; break;
        case pcsp::Outcome::refuted_exhaustively: os << "outcome=refuted-exhaustively"; break;
        case pcsp::Outcome::unknown: os << "outcome=unknown"; break;
    }
    os << " candidates=" << s.stats.candidates << " nodes=" << s.stats.nodes;
    if (!s.stats.note.empty()) os << " note=\"" << s.stats.note << "\"";
    return os.str();
}

std::string vector_line(const char* head, const std::vector<int>& v) {
    std::ostringstream os;
    os << head;
    for (int x : v) os << ' ' << x;
    return os.str();
}

int search_status(const pcsp::PolymorphismSearch& s, char** summary, char** table) {
    set_out(summary, search_summary(s));
    switch (s.outcome) {
        case pcsp::Outcome::found:
            if (s.table) set_out(table, table_line(*s.table));
            return PCSP_YES;
        case pcsp::Outcome::refuted_exhaustively: return PCSP_NO;
        case pcsp::Outcome::unknown: return PCSP_UNKNOWN;
    }
    return PCSP_ERR;
}

} // namespace

extern "C" {

const char* pcsp_last_error(void) { return g_last_error.c_str(); }

void pcsp_string_free(char* s) { std::free(s); }

pcsp_structure* pcsp_structure_parse(const char* text) {
    if (!text) {
        g_last_error = "null text";
        return nullptr;
    }
    return guarded_new<pcsp_structure>([&] { return pcsp::parse_structure(text); });
}

int pcsp_structure_serialize(const pcsp_structure* s, char** out) {
    if (int rc = require(s && out, "null argument"); rc != PCSP_YES) return rc;
    return guarded([&] {
        set_out(out, pcsp::serialize_structure(s->v));
        return PCSP_YES;
    });
}

int pcsp_structure_domain_size(const pcsp_structure* s) { return s ? s->v.domain_size : -1; }

long long pcsp_structure_relation_size(const pcsp_structure* s, int index) {
    if (!s || index < 0 || index >= static_cast<int>(s->v.relations.size())) return -1;
    auto size = s->v.relations[static_cast<size_t>(index)].size();
    return size ? static_cast<long long>(*size) : -1;
}

void pcsp_structure_free(pcsp_structure* s) { delete s; }

pcsp_instance* pcsp_instance_parse(const char* text) {
    if (!text) {
        g_last_error = "null text";
        return nullptr;
    }
    return guarded_new<pcsp_instance>([&] { return pcsp::parse_instance(text); });
}

int pcsp_instance_serialize(const pcsp_instance* inst, char** out) {
    if (int rc = require(inst && out, "null argument"); rc != PCSP_YES) return rc;
    return guarded([&] {
        set_out(out, pcsp::serialize_instance(inst->v));
        return PCSP_YES;
    });
}

void pcsp_instance_free(pcsp_instance* inst) { delete inst; }

pcsp_witness* pcsp_witness_parse(const char* text) {
    if (!text) {
        g_last_error = "null text";
        return nullptr;
    }
    return guarded_new<pcsp_witness>([&] { return pcsp::parse_witness(text); });
}

int pcsp_witness_serialize(const pcsp_witness* w, char** out) {
    if (int rc = require(w && out, "null argument"); rc != PCSP_YES) return rc;
    return guarded([&] {
        set_out(out, pcsp::serialize_witness(w->v));
        return PCSP_YES;
    });
}

void pcsp_witness_free(pcsp_witness* w) { delete w; }

pcsp_map* pcsp_map_parse(const char* text) {
    if (!text) {
        g_last_error = "null text";
        return nullptr;
    }
    return guarded_new<pcsp_map>([&] { return pcsp::parse_map(text); });
}

int pcsp_map_serialize(const pcsp_map* m, char** out) {
    if (int rc = require(m && out, "null argument"); rc != PCSP_YES) return rc;
    return guarded([&] {
        set_out(out, pcsp::serialize_map(m->v));
        return PCSP_YES;
    });
}

void pcsp_map_free(pcsp_map* m) { delete m; }

pcsp_thm1* pcsp_thm1_build(int n, int p, long long materialize_threshold) {
    return guarded_new<pcsp_thm1>([&] {
        return pcsp::build_thm1(n, p,
                                materialize_threshold > 0 ? materialize_threshold : 1'000'000);
    });
}

pcsp_structure* pcsp_thm1_structure(const pcsp_thm1* b, char which) {
    if (!b) {
        g_last_error = "null bundle";
        return nullptr;
    }
    switch (which) {
        case 'A': return new pcsp_structure{b->v.A};
        case 'B': return new pcsp_structure{b->v.B};
        case 'C': return new pcsp_structure{b->v.C};
    }
    g_last_error = "unknown structure selector";
    return nullptr;
}

pcsp_map* pcsp_thm1_map(const pcsp_thm1* b, char which) {
    if (!b) {
        g_last_error = "null bundle";
        return nullptr;
    }
    if (which == 'g') return new pcsp_map{b->v.g};
    if (which == 'h') return new pcsp_map{b->v.h};
    g_last_error = "unknown map selector";
    return nullptr;
}

void pcsp_thm1_free(pcsp_thm1* b) { delete b; }

pcsp_thm2* pcsp_thm2_build(int p, int allow_small) {
    return guarded_new<pcsp_thm2>([&] { return pcsp::build_thm2(p, allow_small != 0); });
}

pcsp_structure* pcsp_thm2_structure(const pcsp_thm2* b, char which) {
    if (!b) {
        g_last_error = "null bundle";
        return nullptr;
    }
    switch (which) {
        case 'A': return new pcsp_structure{b->v.A};
        case 'B': return new pcsp_structure{b->v.B};
        case 'C': return new pcsp_structure{b->v.C};
    }
    g_last_error = "unknown structure selector";
    return nullptr;
}

pcsp_map* pcsp_thm2_map(const pcsp_thm2* b) {
    if (!b) {
        g_last_error = "null bundle";
        return nullptr;
    }
    return new pcsp_map{b->v.h};
}

pcsp_witness* pcsp_thm2_witness(const pcsp_thm2* b) {
    if (!b) {
        g_last_error = "null bundle";
        return nullptr;
    }
    return new pcsp_witness{b->v.U};
}

int pcsp_thm2_u(const pcsp_thm2* b, char** out) {
    if (int rc = require(b && out, "null argument"); rc != PCSP_YES) return rc;
    set_out(out, vector_line("u", b->v.u));
    return PCSP_YES;
}

void pcsp_thm2_free(pcsp_thm2* b) { delete b; }

int pcsp_find_homomorphism(const pcsp_structure* from, const pcsp_structure* to,
                           long long budget, pcsp_map** out) {
    if (int rc = require(from && to, "null structure"); rc != PCSP_YES) return rc;
    return guarded([&] {
        auto h = pcsp::find_homomorphism(from->v, to->v, pick_budget(budget));
        if (!h) return PCSP_NO;
        if (out) *out = new pcsp_map{*h};
        return PCSP_YES;
    });
}

int pcsp_is_homomorphism(const pcsp_map* f, const pcsp_structure* from,
                         const pcsp_structure* to) {
    if (int rc = require(f && from && to, "null argument"); rc != PCSP_YES) return rc;
    return guarded(
        [&] { return pcsp::is_homomorphism(f->v, from->v, to->v) ? PCSP_YES : PCSP_NO; });
}

int pcsp_core_of(const pcsp_structure* s, long long budget, pcsp_structure** out_core,
                 char** out_vertices) {
    if (int rc = require(s != nullptr, "null structure"); rc != PCSP_YES) return rc;
    return guarded([&] {
        pcsp::CoreResult core = pcsp::core_of(s->v, pick_budget(budget));
        if (core.outcome != pcsp::Outcome::found) {
            g_last_error = core.stats.note;
            return PCSP_UNKNOWN;
        }
        if (out_core) *out_core = new pcsp_structure{core.core};
        if (out_vertices) set_out(out_vertices, vector_line("vertices", core.vertices));
        return PCSP_YES;
    });
}

int pcsp_find_cyclic_polymorphism(const pcsp_structure* a, const pcsp_structure* b, int p,
                                  long long budget, int allow_nonprime, char** summary,
                                  char** table) {
    if (int rc = require(a && b, "null structure"); rc != PCSP_YES) return rc;
    return guarded([&] {
        auto s = pcsp::find_cyclic_polymorphism(a->v, b->v, p, pick_budget(budget),
                                                allow_nonprime != 0);
        return search_status(s, summary, table);
    });
}

int pcsp_find_majority_polymorphism(const pcsp_structure* a, long long budget, char** summary,
                                    char** table) {
    if (int rc = require(a != nullptr, "null structure"); rc != PCSP_YES) return rc;
    return guarded([&] {
        auto s = pcsp::find_majority_polymorphism(a->v, pick_budget(budget));
        return search_status(s, summary, table);
    });
}

int pcsp_verify_witness(const pcsp_structure* a, const pcsp_structure* b, const pcsp_witness* w,
                        long long budget, char** reason) {
    if (int rc = require(a && b && w, "null argument"); rc != PCSP_YES) return rc;
    return guarded([&] {
        auto check = pcsp::verify_obstruction_witness(a->v, b->v, w->v, pick_budget(budget));
        set_out(reason, check.valid ? "valid" : check.reason);
        return check.valid ? PCSP_YES : PCSP_NO;
    });
}

int pcsp_check_sandwich(const pcsp_structure* a, const pcsp_structure* c,
                        const pcsp_structure* b, long long budget, pcsp_map** out_left,
                        pcsp_map** out_right, char** detail) {
    if (int rc = require(a && b && c, "null structure"); rc != PCSP_YES) return rc;
    return guarded([&] {
        auto check = pcsp::check_sandwich(a->v, c->v, b->v, pick_budget(budget));
        if (!check.ok) {
            set_out(detail, check.failed == pcsp::SandwichCheck::Side::left ? "left" : "right");
            return PCSP_NO;
        }
        set_out(detail, "sandwich");
        if (out_left) *out_left = new pcsp_map{*check.left};
        if (out_right) *out_right = new pcsp_map{*check.right};
        return PCSP_YES;
    });
}

int pcsp_solve_affine(const pcsp_structure* c, const pcsp_instance* inst, char** assignment) {
    if (int rc = require(c && inst, "null argument"); rc != PCSP_YES) return rc;
    return guarded([&] {
        pcsp::AffineStructure affine = pcsp::affine_structure_of(c->v);
        auto solved = pcsp::solve_affine_csp(affine, inst->v);
        if (!solved.sat) return PCSP_NO;
        set_out(assignment, vector_line("assignment", solved.assignment));
        return PCSP_YES;
    });
}

int pcsp_pcsp_decide(const pcsp_structure* a, const pcsp_structure* b,
                     const pcsp_structure* via, const pcsp_instance* inst, long long budget,
                     char** detail) {
    if (int rc = require(a && b && via && inst, "null argument"); rc != PCSP_YES) return rc;
    return guarded([&] {
        auto sandwich = pcsp::check_sandwich(a->v, via->v, b->v, pick_budget(budget));
        if (!sandwich.ok) {
            g_last_error = "structure is not sandwiched (failed on the ";
            g_last_error +=
                sandwich.failed == pcsp::SandwichCheck::Side::left ? "left)" : "right)";
            return PCSP_ERR;
        }
        pcsp::AffineStructure affine = pcsp::affine_structure_of(via->v);
        auto answer =
            pcsp::pcsp_decide_via_sandwich(a->v, b->v, affine, inst->v, /*verified=*/true);
        set_out(detail, answer == pcsp::PcspAnswer::yes ? "yes" : "no");
        return answer == pcsp::PcspAnswer::yes ? PCSP_YES : PCSP_NO;
    });
}

int pcsp_verify_lemma32(int n, int p, long long budget, char** report) {
    return guarded([&] {
        auto reports = pcsp::verify_lemma32(n, p, budget > 0 ? budget : 200'000'000);
        set_out(report, join_reports(reports));
        return report_status(reports);
    });
}

int pcsp_verify_thm2_claims(int p, char** report) {
    return guarded([&] {
        auto reports = pcsp::verify_thm2_claims(p);
        set_out(report, join_reports(reports));
        return report_status(reports);
    });
}

int pcsp_verify_thm31(int n, int p, long long budget, char** report) {
    return guarded([&] {
        auto reports = pcsp::verify_thm31(n, p, budget > 0 ? budget : 50'000'000);
        set_out(report, join_reports(reports));
        return report_status(reports);
    });
}

int pcsp_verify_lemma41(const pcsp_structure* a, const pcsp_structure* c, const pcsp_map* g,
                        char** report) {
    if (int rc = require(a && c && g, "null argument"); rc != PCSP_YES) return rc;
    return guarded([&] {
        pcsp::ClaimReport r = pcsp::verify_lemma41(a->v, c->v, g->v);
        set_out(report, r.human_line() + "\n" + r.machine_line() + "\n");
        if (r.status == pcsp::ClaimStatus::holds) return PCSP_YES;
        if (r.status == pcsp::ClaimStatus::fails) return PCSP_NO;
        g_last_error = r.detail;
        return PCSP_ERR; // precondition failure
    });
}

int pcsp_certify_with_witness(const pcsp_structure* a, const pcsp_structure* b, int p,
                              const pcsp_witness* w, long long budget, char** certificate) {
    if (int rc = require(a && b && w && certificate, "null argument"); rc != PCSP_YES) return rc;
    return guarded([&] {
        auto cert = pcsp::make_refutation_certificate(a->v, b->v, p, w->v, pick_budget(budget));
        set_out(certificate, pcsp::refutation_certificate_text(cert));
        return PCSP_YES;
    });
}

int pcsp_certify_exhaustive(const pcsp_structure* a, const pcsp_structure* b, int p,
                            long long budget, char** certificate) {
    if (int rc = require(a && b && certificate, "null argument"); rc != PCSP_YES) return rc;
    return guarded([&] {
        auto outcome = pcsp::find_cyclic_polymorphism(a->v, b->v, p, pick_budget(budget));
        if (outcome.outcome == pcsp::Outcome::unknown) {
            g_last_error = "no certificate from Unknown: " + outcome.stats.note;
            return PCSP_UNKNOWN;
        }
        auto cert = pcsp::make_refutation_certificate(a->v, b->v, p, outcome);
        set_out(certificate, pcsp::refutation_certificate_text(cert));
        return PCSP_YES;
    });
}

int pcsp_certificate_recheck(const char* text, long long budget, char** detail) {
    if (int rc = require(text != nullptr, "null text"); rc != PCSP_YES) return rc;
    return guarded([&] {
        pcsp::Certificate cert = pcsp::parse_certificate(text);
        std::string why;
        bool ok = pcsp::recheck_certificate(cert, &why, pick_budget(budget));
        set_out(detail, ok ? "certificate verified" : why);
        return ok ? PCSP_YES : PCSP_NO;
    });
}

int pcsp_graph_classify(const pcsp_structure* g, char** detail) {
    if (int rc = require(g != nullptr, "null structure"); rc != PCSP_YES) return rc;
    return guarded([&] {
        pcsp::Digraph graph = pcsp::digraph_of_structure(g->v);
        auto cls = pcsp::classify_graph_csp(graph);
        std::ostringstream os;
        os << "verdict=" << (cls.verdict == pcsp::CspVerdict::in_p ? "in-P" : "NP-complete");
        switch (cls.reason) {
            case pcsp::CspReason::loop: os << " reason=loop"; break;
            case pcsp::CspReason::bipartite: os << " reason=bipartite"; break;
            case pcsp::CspReason::hell_nesetril_nonbipartite:
                os << " reason=non-bipartite";
                break;
            default: break;
        }
        os << " caveat=\"" << cls.caveat << "\"";
        if (!cls.odd_closed_walk.empty()) {
            os << " odd-walk=";
            for (size_t i = 0; i < cls.odd_closed_walk.size(); ++i)
                os << (i ? "," : "") << cls.odd_closed_walk[i];
        }
        set_out(detail, os.str());
        return cls.verdict == pcsp::CspVerdict::in_p ? PCSP_YES : PCSP_NO;
    });
}

int pcsp_digraph_smooth_part(const pcsp_structure* g, pcsp_structure** out,
                             char** out_vertices) {
    if (int rc = require(g != nullptr, "null structure"); rc != PCSP_YES) return rc;
    return guarded([&] {
        pcsp::SmoothPart part = pcsp::smooth_part(pcsp::digraph_of_structure(g->v));
        if (out)
            *out = new pcsp_structure{pcsp::structure_of_digraph(part.graph, g->v.name)};
        if (out_vertices) set_out(out_vertices, vector_line("vertices", part.vertices));
        return PCSP_YES;
    });
}

int pcsp_digraph_classify(const pcsp_structure* g, long long budget, char** detail) {
    if (int rc = require(g != nullptr, "null structure"); rc != PCSP_YES) return rc;
    return guarded([&] {
        pcsp::Digraph graph = pcsp::digraph_of_structure(g->v);
        auto cls = pcsp::classify_smooth_digraph_csp(graph, pick_budget(budget));
        std::ostringstream os;
        if (cls.verdict == pcsp::CspVerdict::unknown) {
            set_out(detail, "verdict=unknown reason=budget");
            return PCSP_UNKNOWN;
        }
        os << "verdict=" << (cls.verdict == pcsp::CspVerdict::in_p ? "in-P" : "NP-complete");
        switch (cls.reason) {
            case pcsp::CspReason::loop: os << " reason=loop"; break;
            case pcsp::CspReason::cycle_union_core: os << " reason=cycle-union-core"; break;
            case pcsp::CspReason::smooth_non_cycle_core:
                os << " reason=non-cycle-core";
                break;
            default: break;
        }
        os << " caveat=\"" << cls.caveat << "\"";
        if (!cls.cycle_lengths.empty()) {
            os << " cycle-lengths=";
            for (size_t i = 0; i < cls.cycle_lengths.size(); ++i)
                os << (i ? "," : "") << cls.cycle_lengths[i];
        }
        if (!cls.core_vertices.empty()) {
            os << " core-vertices=";
            for (size_t i = 0; i < cls.core_vertices.size(); ++i)
                os << (i ? "," : "") << cls.core_vertices[i];
        }
        set_out(detail, os.str());
        return cls.verdict == pcsp::CspVerdict::in_p ? PCSP_YES : PCSP_NO;
    });
}

int pcsp_digraph_solve_cycles(const pcsp_structure* target, const pcsp_structure* instance,
                              pcsp_map** out) {
    if (int rc = require(target && instance, "null structure"); rc != PCSP_YES) return rc;
    return guarded([&] {
        auto res = pcsp::solve_cycle_union_csp(pcsp::digraph_of_structure(target->v),
                                               pcsp::digraph_of_structure(instance->v));
        if (!res.yes) return PCSP_NO;
        if (out && res.hom) *out = new pcsp_map{*res.hom};
        return PCSP_YES;
    });
}

} // extern "C"
