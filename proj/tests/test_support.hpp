#pragma once

// Independent reference computations used by the tests. None of these call
// into the library's solvers.

#include <algorithm>
#include <bit>
#include <iterator>
#include <tuple>
#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include "steiner/steiner.hpp"

namespace steiner::testing {

inline constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();

/// All-pairs shortest path weights.
inline std::vector<std::vector<std::uint64_t>> floyd_warshall(const Graph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<std::uint64_t>> d(n, std::vector<std::uint64_t>(n, kInf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (const Edge& e : g.edges()) {
        d[e.u][e.v] = std::min(d[e.u][e.v], e.w.value());
        d[e.v][e.u] = std::min(d[e.v][e.u], e.w.value());
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i][k] != kInf && d[k][j] != kInf) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d;
}

/// Minimum Steiner tree weight by enumerating every edge subset and keeping
/// the ones that form a single tree touching all terminals. Edge count <= 20.
inline std::uint64_t subtree_enumeration(const Graph& g, const std::vector<VertexId>& terminals) {
    std::set<VertexId> terms(terminals.begin(), terminals.end());
    if (terms.size() <= 1) return 0;
    auto edges = g.edges();
    const std::size_t m = edges.size();
    std::uint64_t best = kInf;
    for (std::uint32_t pick = 1; pick < (1U << m); ++pick) {
        std::vector<VertexId> parent(g.vertex_count());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<VertexId>(i);
        auto find = [&](VertexId x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        bool cycle = false;
        std::uint64_t weight = 0;
        std::set<VertexId> touched;
        for (std::size_t i = 0; i < m && !cycle; ++i) {
            if (!(pick >> i & 1U)) continue;
            VertexId a = find(edges[i].u), b = find(edges[i].v);
            if (a == b) cycle = true;
            parent[a] = b;
            weight += edges[i].w.value();
            touched.insert(edges[i].u);
            touched.insert(edges[i].v);
        }
        if (cycle || weight >= best) continue;
        VertexId root = find(*touched.begin());
        bool ok = std::all_of(touched.begin(), touched.end(), [&](VertexId v) { return find(v) == root; }) &&
                  std::all_of(terms.begin(), terms.end(), [&](VertexId t) { return touched.count(t) > 0; });
        if (ok) best = weight;
    }
    return best;
}

/// Deepest common node of the root paths of all inputs.
inline NodeId path_intersection_lca(const TreeDecomposition& td, const std::vector<NodeId>& nodes) {
    std::set<NodeId> common;
    for (NodeId x = nodes.front(); x != kNoNode; x = td.parent(x)) common.insert(x);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        std::set<NodeId> path;
        for (NodeId x = nodes[i]; x != kNoNode; x = td.parent(x)) path.insert(x);
        std::set<NodeId> keep;
        std::set_intersection(common.begin(), common.end(), path.begin(), path.end(), std::inserter(keep, keep.end()));
        common = std::move(keep);
    }
    NodeId best = *common.begin();
    for (NodeId x : common)
        if (td.depth(x) > td.depth(best)) best = x;
    return best;
}

inline Graph graph_of(std::size_t n, std::initializer_list<std::tuple<VertexId, VertexId, std::uint64_t>> edges) {
    std::vector<Edge> list;
    for (auto [u, v, w] : edges) list.push_back(make_edge(u, v, Weight(w)));
    return Graph(n, list);
}

inline std::uint64_t tree_edge_sum(const SteinerTree& t) {
    std::uint64_t s = 0;
    for (const Edge& e : t.edges) s += e.w.value();
    return s;
}

/// Every vertex subset of `vertices` with size in [lo, hi].
inline std::vector<std::vector<VertexId>> subsets(const std::vector<VertexId>& vertices, std::size_t lo, std::size_t hi) {
    std::vector<std::vector<VertexId>> out;
    for (std::uint32_t m = 0; m < (1U << vertices.size()); ++m) {
        auto size = static_cast<std::size_t>(std::popcount(m));
        if (size < lo || size > hi) continue;
        std::vector<VertexId> s;
        for (std::size_t i = 0; i < vertices.size(); ++i)
            if (m >> i & 1U) s.push_back(vertices[i]);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace steiner::testing
