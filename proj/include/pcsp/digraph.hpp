#ifndef PCSP_DIGRAPH_HPP
#define PCSP_DIGRAPH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcsp/hom.hpp"
#include "pcsp/structure.hpp"

namespace pcsp {

struct Digraph {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges; // sorted, duplicate-free

    bool has_edge(int u, int v) const;
};

Digraph make_digraph(int vertex_count, std::vector<std::pair<int, int>> edges);
Digraph digraph_of_structure(const Structure& s);
Structure structure_of_digraph(const Digraph& g, const std::string& name = "G");

bool has_loop(const Digraph& g);
bool is_symmetric(const Digraph& g);

// Iteratively deletes vertices missing an in- or out-neighbor; returns the
// induced subgraph together with the surviving original vertex ids.
struct SmoothPart {
    Digraph graph;
    std::vector<int> vertices;
};
SmoothPart smooth_part(const Digraph& g);

struct BipartiteResult {
    bool bipartite = false;
    std::vector<int> coloring;       // 2-coloring when bipartite
    std::vector<int> odd_closed_walk; // closed walk of odd length otherwise
};
BipartiteResult is_bipartite(const Digraph& g); // requires symmetric edges

struct CycleUnionResult {
    bool is_union = false;
    std::vector<int> lengths; // sorted cycle-length multiset
};
CycleUnionResult is_disjoint_union_of_cycles(const Digraph& g);

enum class CspVerdict { in_p, np_complete, unknown };
enum class CspReason {
    loop,
    bipartite,
    hell_nesetril_nonbipartite,
    cycle_union_core,
    smooth_non_cycle_core,
    budget,
};

struct CspClassification {
    CspVerdict verdict = CspVerdict::unknown;
    CspReason reason = CspReason::budget;
    std::string caveat = "assuming P != NP";
    std::vector<int> coloring;        // bipartite evidence
    std::vector<int> odd_closed_walk; // non-bipartite evidence
    std::optional<Digraph> core;      // smooth-digraph evidence
    std::vector<int> core_vertices;
    std::vector<int> cycle_lengths;
};

// Hell-Nesetril dichotomy for symmetric loopless graphs (loops short-circuit
// to tractable).
CspClassification classify_graph_csp(const Digraph& g);

// Barto-Kozik-Niven dichotomy for smooth digraphs via the core.
CspClassification classify_smooth_digraph_csp(const Digraph& g,
                                              std::int64_t budget = default_budget());

struct CycleSolveResult {
    bool yes = false;
    std::optional<Homomorphism> hom;
};

// Potential/gcd decision procedure for targets that are disjoint unions of
// directed cycles; any returned homomorphism is re-verified.
CycleSolveResult solve_cycle_union_csp(const Digraph& target, const Digraph& instance);

} // namespace pcsp

#endif
