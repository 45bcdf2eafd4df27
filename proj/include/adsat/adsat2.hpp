#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "adsat/instance.hpp"
#include "adsat/rng.hpp"
#include "adsat/satcore.hpp"

namespace adsat {

/// Simple undirected graph on the bits of a K=2 instance, one edge per
/// clause. Self-loops and parallel edges are rejected.
class VariableGraph {
public:
    using Edge = std::pair<Bit, Bit>;

    VariableGraph(std::size_t n_nodes, std::vector<Edge> edges);

    std::size_t n_nodes() const noexcept { return n_nodes_; }
    std::size_t n_edges() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::vector<std::size_t> degrees() const;
    /// Nodes with at least one incident edge.
    std::size_t n_active_nodes() const;
    bool empty() const noexcept { return edges_.empty(); }

    /// Connected components over the non-isolated nodes, each keeping the
    /// original node numbering.
    std::vector<VariableGraph> components() const;

private:
    std::size_t n_nodes_;
    std::vector<Edge> edges_;
};

enum class ComponentClass { tree, single_cycle, theta, other };

const char* to_string(ComponentClass c);

VariableGraph build_variable_graph(const AdsatInstance& inst);

/// Deletes degree-1 nodes with their edge until none remain (the 2-core).
/// With `order` the next leaf is picked at random; the fixed point does not
/// depend on it.
VariableGraph prune_trees(const VariableGraph& g, Rng* order = nullptr);

/// Classifies a connected 2-core: single_cycle when every degree is 2; theta
/// when exactly two nodes have degree 3, the rest degree 2, and the three
/// chains leaving one degree-3 node all end at the other; other otherwise.
/// Throws ParameterError when the input is empty, disconnected or has a
/// degree-1 node.
ComponentClass classify_component(const VariableGraph& core);

struct ComponentReport {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    ComponentClass cls = ComponentClass::tree;
};

struct TwoAdsatVerdict {
    SatStatus status = SatStatus::sat;
    std::vector<ComponentReport> components;

    bool is_unsat() const noexcept { return status == SatStatus::unsat; }
};

/// Polynomial decision for K=2: SAT iff every connected component prunes to
/// nothing, a single cycle or a theta graph.
TwoAdsatVerdict decide_2adsat(const AdsatInstance& inst);

} // namespace adsat
