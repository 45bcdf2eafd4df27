#pragma once

// Small-graph enumeration for the K=2 equivalence checks.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "adsat/instance.hpp"

namespace adsat::graphs {

using EdgeList = std::vector<std::pair<Bit, Bit>>;

inline AdsatInstance k2_instance(std::size_t n, const EdgeList& edges) {
    std::vector<Bit> slots;
    for (auto [u, v] : edges) {
        slots.push_back(u);
        slots.push_back(v);
    }
    return AdsatInstance(n, 2, std::move(slots));
}

inline bool connected_spanning(std::size_t n, const EdgeList& edges) {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [u, v] : edges) parent[find(u)] = find(v);
    for (std::size_t v = 1; v < n; ++v)
        if (find(v) != find(0)) return false;
    return true;
}

// Every connected simple graph on exactly n >= 2 nodes, one per isomorphism
// class (canonical form: the smallest edge bitmask over all relabellings).
inline std::vector<EdgeList> connected_graphs(std::size_t n) {
    std::vector<std::pair<Bit, Bit>> pairs;
    for (Bit u = 0; u < n; ++u)
        for (Bit v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    std::vector<std::vector<std::size_t>> index(n, std::vector<std::size_t>(n));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        index[pairs[i].first][pairs[i].second] = i;
        index[pairs[i].second][pairs[i].first] = i;
    }
    std::vector<std::vector<Bit>> perms;
    std::vector<Bit> p(n);
    std::iota(p.begin(), p.end(), Bit{0});
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));

    std::set<std::uint32_t> seen;
    std::vector<EdgeList> out;
    for (std::uint32_t mask = 1; mask < (1u << pairs.size()); ++mask) {
        EdgeList edges;
        for (std::size_t i = 0; i < pairs.size(); ++i)
            if (mask >> i & 1u) edges.push_back(pairs[i]);
        if (edges.size() + 1 < n || !connected_spanning(n, edges)) continue;
        std::uint32_t canon = ~0u;
        for (const auto& q : perms) {
            std::uint32_t m = 0;
            for (auto [u, v] : edges) m |= 1u << index[q[u]][q[v]];
            canon = std::min(canon, m);
        }
        if (seen.insert(canon).second) out.push_back(edges);
    }
    return out;
}

} // namespace adsat::graphs
