#include "pcsp/digraph.hpp"

#include <algorithm>
#include <numeric>

namespace pcsp {

bool Digraph::has_edge(int u, int v) const {
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

Digraph make_digraph(int vertex_count, std::vector<std::pair<int, int>> edges) {
    if (vertex_count < 0) throw parse_error("digraph: negative vertex count");
    for (auto [u, v] : edges)
        if (u < 0 || u >= vertex_count || v < 0 || v >= vertex_count)
            throw parse_error("digraph: edge endpoint out of range");
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Digraph{vertex_count, std::move(edges)};
}

Digraph digraph_of_structure(const Structure& s) {
    if (s.signature.size() != 1 || s.signature.front().arity != 2)
        throw precondition_error("digraph_of_structure: expected one binary relation");
    const Relation& rel = s.relations.front();
    if (rel.kind != RelKind::extensional)
        throw precondition_error("digraph_of_structure: edge relation must be extensional");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(rel.tuples.size());
    for (const auto& t : rel.tuples) edges.emplace_back(t[0], t[1]);
    return make_digraph(s.domain_size, std::move(edges));
}

Structure structure_of_digraph(const Digraph& g, const std::string& name) {
    Structure s;
    s.name = name;
    s.domain_size = g.vertex_count;
    s.signature = {{"E", 2}};
    std::vector<Tuple> tuples;
    tuples.reserve(g.edges.size());
    for (auto [u, v] : g.edges) tuples.push_back({u, v});
    s.relations = {extensional_relation(2, std::move(tuples))};
    return s;
}

bool has_loop(const Digraph& g) {
    for (auto [u, v] : g.edges)
        if (u == v) return true;
    return false;
}

bool is_symmetric(const Digraph& g) {
    for (auto [u, v] : g.edges)
        if (!g.has_edge(v, u)) return false;
    return true;
}

SmoothPart smooth_part(const Digraph& g) {
    std::vector<char> alive(static_cast<size_t>(g.vertex_count), 1);
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<char> has_in(static_cast<size_t>(g.vertex_count), 0);
        std::vector<char> has_out(static_cast<size_t>(g.vertex_count), 0);
        for (auto [u, v] : g.edges) {
            if (!alive[static_cast<size_t>(u)] || !alive[static_cast<size_t>(v)]) continue;
            has_out[static_cast<size_t>(u)] = 1;
            has_in[static_cast<size_t>(v)] = 1;
        }
        for (int v = 0; v < g.vertex_count; ++v)
            if (alive[static_cast<size_t>(v)] &&
                (!has_in[static_cast<size_t>(v)] || !has_out[static_cast<size_t>(v)])) {
                alive[static_cast<size_t>(v)] = 0;
                changed = true;
            }
    }
    SmoothPart out;
    std::vector<int> relabel(static_cast<size_t>(g.vertex_count), -1);
    for (int v = 0; v < g.vertex_count; ++v)
        if (alive[static_cast<size_t>(v)]) {
            relabel[static_cast<size_t>(v)] = static_cast<int>(out.vertices.size());
            out.vertices.push_back(v);
        }
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : g.edges)
        if (alive[static_cast<size_t>(u)] && alive[static_cast<size_t>(v)])
            edges.emplace_back(relabel[static_cast<size_t>(u)], relabel[static_cast<size_t>(v)]);
    out.graph = make_digraph(static_cast<int>(out.vertices.size()), std::move(edges));
    return out;
}

BipartiteResult is_bipartite(const Digraph& g) {
    if (!is_symmetric(g)) throw precondition_error("is_bipartite: edge relation not symmetric");
    BipartiteResult res;
    res.coloring.assign(static_cast<size_t>(g.vertex_count), -1);
    std::vector<int> parent(static_cast<size_t>(g.vertex_count), -1);

    std::vector<std::vector<int>> adj(static_cast<size_t>(g.vertex_count));
    for (auto [u, v] : g.edges) adj[static_cast<size_t>(u)].push_back(v);

    for (int root = 0; root < g.vertex_count; ++root) {
        if (res.coloring[static_cast<size_t>(root)] != -1) continue;
        res.coloring[static_cast<size_t>(root)] = 0;
        std::vector<int> queue{root};
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int u = queue[qi];
            for (int v : adj[static_cast<size_t>(u)]) {
                if (res.coloring[static_cast<size_t>(v)] == -1) {
                    res.coloring[static_cast<size_t>(v)] = 1 - res.coloring[static_cast<size_t>(u)];
                    parent[static_cast<size_t>(v)] = u;
                    queue.push_back(v);
                } else if (res.coloring[static_cast<size_t>(v)] ==
                           res.coloring[static_cast<size_t>(u)]) {
                    // odd closed walk: path u->root, then root->v, then edge v-u
                    std::vector<int> up, vp;
                    for (int x = u; x != -1; x = parent[static_cast<size_t>(x)]) up.push_back(x);
                    for (int x = v; x != -1; x = parent[static_cast<size_t>(x)]) vp.push_back(x);
                    // trim to the lowest common ancestor
                    while (up.size() > 1 && vp.size() > 1 &&
                           up[up.size() - 1] == vp[vp.size() - 1] &&
                           up[up.size() - 2] == vp[vp.size() - 2]) {
                        up.pop_back();
                        vp.pop_back();
                    }
                    res.odd_closed_walk = up;
                    for (auto it = vp.rbegin(); it != vp.rend(); ++it)
                        if (*it != up.back() || it + 1 == vp.rend())
                            res.odd_closed_walk.push_back(*it);
                    res.bipartite = false;
                    return res;
                }
            }
        }
    }
    res.bipartite = true;
    return res;
}

CycleUnionResult is_disjoint_union_of_cycles(const Digraph& g) {
    std::vector<int> indeg(static_cast<size_t>(g.vertex_count), 0);
    std::vector<int> outdeg(static_cast<size_t>(g.vertex_count), 0);
    std::vector<int> succ(static_cast<size_t>(g.vertex_count), -1);
    for (auto [u, v] : g.edges) {
        ++outdeg[static_cast<size_t>(u)];
        ++indeg[static_cast<size_t>(v)];
        succ[static_cast<size_t>(u)] = v;
    }
    for (int v = 0; v < g.vertex_count; ++v)
        if (indeg[static_cast<size_t>(v)] != 1 || outdeg[static_cast<size_t>(v)] != 1)
            return {false, {}};
    CycleUnionResult res;
    res.is_union = true;
    std::vector<char> seen(static_cast<size_t>(g.vertex_count), 0);
    for (int v = 0; v < g.vertex_count; ++v) {
        if (seen[static_cast<size_t>(v)]) continue;
        int len = 0;
        for (int x = v; !seen[static_cast<size_t>(x)]; x = succ[static_cast<size_t>(x)]) {
            seen[static_cast<size_t>(x)] = 1;
            ++len;
        }
        res.lengths.push_back(len);
    }
    std::sort(res.lengths.begin(), res.lengths.end());
    return res;
}

CspClassification classify_graph_csp(const Digraph& g) {
    if (!is_symmetric(g))
        throw precondition_error("classify_graph_csp: edge relation not symmetric");
    CspClassification out;
    if (has_loop(g)) {
        out.verdict = CspVerdict::in_p;
        out.reason = CspReason::loop;
        return out;
    }
    BipartiteResult bip = is_bipartite(g);
    if (bip.bipartite) {
        out.verdict = CspVerdict::in_p;
        out.reason = CspReason::bipartite;
        out.coloring = std::move(bip.coloring);
    } else {
        out.verdict = CspVerdict::np_complete;
        out.reason = CspReason::hell_nesetril_nonbipartite;
        out.odd_closed_walk = std::move(bip.odd_closed_walk);
    }
    return out;
}

CspClassification classify_smooth_digraph_csp(const Digraph& g, std::int64_t budget) {
    SmoothPart sp = smooth_part(g);
    if (sp.graph.vertex_count != g.vertex_count)
        throw precondition_error("classify_smooth_digraph_csp: input is not smooth");
    CspClassification out;
    if (has_loop(g)) {
        out.verdict = CspVerdict::in_p;
        out.reason = CspReason::loop;
        return out;
    }
    CoreResult core = core_of(structure_of_digraph(g), budget);
    if (core.outcome != Outcome::found) {
        out.verdict = CspVerdict::unknown;
        out.reason = CspReason::budget;
        return out;
    }
    Digraph core_graph = digraph_of_structure(core.core);
    CycleUnionResult cycles = is_disjoint_union_of_cycles(core_graph);
    out.core = core_graph;
    out.core_vertices = core.vertices;
    if (cycles.is_union) {
        out.verdict = CspVerdict::in_p;
        out.reason = CspReason::cycle_union_core;
        out.cycle_lengths = std::move(cycles.lengths);
    } else {
        out.verdict = CspVerdict::np_complete;
        out.reason = CspReason::smooth_non_cycle_core;
    }
    return out;
}

namespace {

struct TargetCycle {
    int length = 0;
    std::vector<int> vertices; // in edge order, starting at the least vertex
};

std::vector<TargetCycle> cycle_decomposition(const Digraph& g) {
    std::vector<int> succ(static_cast<size_t>(g.vertex_count), -1);
    for (auto [u, v] : g.edges) succ[static_cast<size_t>(u)] = v;
    std::vector<TargetCycle> cycles;
    std::vector<char> seen(static_cast<size_t>(g.vertex_count), 0);
    for (int v = 0; v < g.vertex_count; ++v) {
        if (seen[static_cast<size_t>(v)]) continue;
        TargetCycle c;
        for (int x = v; !seen[static_cast<size_t>(x)]; x = succ[static_cast<size_t>(x)]) {
            seen[static_cast<size_t>(x)] = 1;
            c.vertices.push_back(x);
        }
        c.length = static_cast<int>(c.vertices.size());
        cycles.push_back(std::move(c));
    }
    return cycles;
}

} // namespace

CycleSolveResult solve_cycle_union_csp(const Digraph& target, const Digraph& instance) {
    CycleUnionResult cu = is_disjoint_union_of_cycles(target);
    if (!cu.is_union)
        throw precondition_error("solve_cycle_union_csp: target is not a disjoint union of cycles");

    if (instance.vertex_count == 0) {
        Homomorphism h;
        h.source_size = 0;
        h.target_size = std::max(target.vertex_count, 1);
        return {true, h};
    }
    if (target.vertex_count == 0) return {false, std::nullopt};

    const std::vector<TargetCycle> cycles = cycle_decomposition(target);

    // undirected adjacency with edge directions for the potential walk
    std::vector<std::vector<std::pair<int, int>>> adj(
        static_cast<size_t>(instance.vertex_count)); // (neighbor, +1/-1)
    for (auto [u, v] : instance.edges) {
        adj[static_cast<size_t>(u)].emplace_back(v, +1);
        adj[static_cast<size_t>(v)].emplace_back(u, -1);
    }

    std::vector<std::int64_t> potential(static_cast<size_t>(instance.vertex_count), 0);
    std::vector<int> component(static_cast<size_t>(instance.vertex_count), -1);
    Homomorphism h;
    h.source_size = instance.vertex_count;
    h.target_size = target.vertex_count;
    h.map.assign(static_cast<size_t>(instance.vertex_count), 0);

    int comp_count = 0;
    for (int root = 0; root < instance.vertex_count; ++root) {
        if (component[static_cast<size_t>(root)] != -1) continue;
        const int comp = comp_count++;
        component[static_cast<size_t>(root)] = comp;
        potential[static_cast<size_t>(root)] = 0;
        std::vector<int> members{root};
        std::vector<int> queue{root};
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int u = queue[qi];
            for (auto [v, dir] : adj[static_cast<size_t>(u)]) {
                if (component[static_cast<size_t>(v)] == -1) {
                    component[static_cast<size_t>(v)] = comp;
                    potential[static_cast<size_t>(v)] = potential[static_cast<size_t>(u)] + dir;
                    members.push_back(v);
                    queue.push_back(v);
                }
            }
        }
        // gcd of the net lengths of all fundamental cycles in the component
        std::int64_t g = 0;
        for (int u : members)
            for (auto [v, dir] : adj[static_cast<size_t>(u)]) {
                if (dir != +1) continue; // treat each directed edge once
                std::int64_t net = potential[static_cast<size_t>(u)] + 1 -
                                   potential[static_cast<size_t>(v)];
                g = std::gcd(g, net);
            }
        const TargetCycle* chosen = nullptr;
        for (const auto& c : cycles)
            if (g % c.length == 0) {
                chosen = &c;
                break;
            }
        if (!chosen) return {false, std::nullopt};
        for (int u : members) {
            std::int64_t phi = potential[static_cast<size_t>(u)] % chosen->length;
            if (phi < 0) phi += chosen->length;
            h.map[static_cast<size_t>(u)] = chosen->vertices[static_cast<size_t>(phi)];
        }
    }

    if (!is_homomorphism(h, structure_of_digraph(instance), structure_of_digraph(target)))
        throw precondition_error("internal: cycle-union homomorphism failed verification");
    return {true, h};
}

} // namespace pcsp
