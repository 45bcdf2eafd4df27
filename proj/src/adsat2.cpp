#include "adsat/adsat2.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "adsat/errors.hpp"

namespace adsat {

const char* to_string(ComponentClass c) {
    switch (c) {
    case ComponentClass::tree: return "tree";
    case ComponentClass::single_cycle: return "single-cycle";
    case ComponentClass::theta: return "theta";
    case ComponentClass::other: return "other";
    }
    return "?";
}

VariableGraph::VariableGraph(std::size_t n_nodes, std::vector<Edge> edges)
    : n_nodes_(n_nodes), edges_(std::move(edges)) {
    std::set<Edge> seen;
    for (auto [u, v] : edges_) {
        if (u >= n_nodes_ || v >= n_nodes_) throw InvalidInstance("graph edge endpoint out of range");
        if (u == v) throw InvalidInstance("variable graph has a self-loop");
        if (!seen.insert({std::min(u, v), std::max(u, v)}).second)
            throw InvalidInstance("variable graph has parallel edges");
    }
}

std::vector<std::size_t> VariableGraph::degrees() const {
    std::vector<std::size_t> deg(n_nodes_, 0);
    for (auto [u, v] : edges_) {
        ++deg[u];
        ++deg[v];
    }
    return deg;
}

std::size_t VariableGraph::n_active_nodes() const {
    const auto deg = degrees();
    return static_cast<std::size_t>(std::count_if(deg.begin(), deg.end(), [](auto d) { return d > 0; }));
}

std::vector<VariableGraph> VariableGraph::components() const {
    std::vector<Bit> parent(n_nodes_);
    for (Bit i = 0; i < n_nodes_; ++i) parent[i] = i;
    auto find = [&](Bit x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [u, v] : edges_) parent[find(u)] = find(v);

    std::vector<std::size_t> slot(n_nodes_, SIZE_MAX);
    std::vector<std::vector<Edge>> parts;
    for (auto e : edges_) {
        const auto r = find(e.first);
        if (slot[r] == SIZE_MAX) {
            slot[r] = parts.size();
            parts.emplace_back();
        }
        parts[slot[r]].push_back(e);
    }
    std::vector<VariableGraph> out;
    out.reserve(parts.size());
    for (auto& p : parts) out.emplace_back(n_nodes_, std::move(p));
    return out;
}

VariableGraph build_variable_graph(const AdsatInstance& inst) {
    if (inst.k() != 2) throw ParameterError("variable graph needs K = 2");
    std::vector<VariableGraph::Edge> edges;
    edges.reserve(inst.n_clauses());
    for (std::size_t a = 0; a < inst.n_clauses(); ++a) edges.emplace_back(inst.bit(a, 0), inst.bit(a, 1));
    return VariableGraph(inst.n_bits(), std::move(edges));
}

VariableGraph prune_trees(const VariableGraph& g, Rng* order) {
    const auto& edges = g.edges();
    std::vector<std::vector<std::size_t>> incident(g.n_nodes());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        incident[edges[e].first].push_back(e);
        incident[edges[e].second].push_back(e);
    }
    auto deg = g.degrees();
    std::vector<bool> alive(edges.size(), true);

    std::vector<Bit> leaves;
    for (Bit v = 0; v < g.n_nodes(); ++v)
        if (deg[v] == 1) leaves.push_back(v);
    while (!leaves.empty()) {
        std::size_t pick = leaves.size() - 1;
        if (order) pick = order->below(leaves.size());
        const Bit v = leaves[pick];
        leaves[pick] = leaves.back();
        leaves.pop_back();
        if (deg[v] != 1) continue;
        for (auto e : incident[v]) {
            if (!alive[e]) continue;
            alive[e] = false;
            const Bit other = edges[e].first == v ? edges[e].second : edges[e].first;
            --deg[v];
            if (--deg[other] == 1) leaves.push_back(other);
            break;
        }
    }

    std::vector<VariableGraph::Edge> kept;
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (alive[e]) kept.push_back(edges[e]);
    return VariableGraph(g.n_nodes(), std::move(kept));
}

ComponentClass classify_component(const VariableGraph& core) {
    if (core.empty()) throw ParameterError("classify_component: empty graph");
    if (core.components().size() != 1) throw ParameterError("classify_component: graph is not connected");
    const auto deg = core.degrees();
    std::vector<Bit> deg3;
    std::size_t max_deg = 0;
    for (Bit v = 0; v < core.n_nodes(); ++v) {
        if (deg[v] == 1) throw ParameterError("classify_component: degree-1 node, prune trees first");
        max_deg = std::max(max_deg, deg[v]);
        if (deg[v] == 3) deg3.push_back(v);
    }
    if (max_deg == 2) return ComponentClass::single_cycle;
    if (max_deg != 3 || deg3.size() != 2) return ComponentClass::other;

    // Walk the three chains leaving deg3[0] through degree-2 nodes.
    const auto& edges = core.edges();
    std::vector<std::vector<std::pair<Bit, std::size_t>>> adj(core.n_nodes());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        adj[edges[e].first].emplace_back(edges[e].second, e);
        adj[edges[e].second].emplace_back(edges[e].first, e);
    }
    const Bit start = deg3[0], target = deg3[1];
    std::size_t interior = 0;
    for (auto [next, via] : adj[start]) {
        Bit at = next;
        std::size_t came = via;
        while (deg[at] == 2) {
            ++interior;
            const auto& nb = adj[at];
            const auto& step = nb[0].second == came ? nb[1] : nb[0];
            came = step.second;
            at = step.first;
        }
        if (at != target) return ComponentClass::other;
    }
    // Three disjoint chains must account for every node of the component.
    if (interior + 2 != core.n_active_nodes())
        throw std::logic_error("theta classification: chain walk does not cover the component");
    return ComponentClass::theta;
}

TwoAdsatVerdict decide_2adsat(const AdsatInstance& inst) {
    const auto graph = build_variable_graph(inst);
    TwoAdsatVerdict verdict;
    for (const auto& comp : graph.components()) {
        ComponentReport report{comp.n_active_nodes(), comp.n_edges(), ComponentClass::tree};
        const auto core = prune_trees(comp);
        if (!core.empty()) report.cls = classify_component(core);
        if (report.cls == ComponentClass::other) verdict.status = SatStatus::unsat;
        verdict.components.push_back(report);
    }
    return verdict;
}

} // namespace adsat
