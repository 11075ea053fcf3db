#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "steiner/error.hpp"
#include "steiner/union_find.hpp"
#include "steiner/weight.hpp"

namespace steiner {

/// Dense 0-based vertex index.
using VertexId = std::uint32_t;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

/// Undirected weighted edge, stored canonically with u < v.
struct Edge {
    VertexId u = 0;
    VertexId v = 0;
    Weight w;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Orders edges by endpoints only. Weight is a function of the endpoints in a simple graph.
inline bool edge_endpoints_less(const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
}

inline Edge make_edge(VertexId a, VertexId b, Weight w) {
    return a < b ? Edge{a, b, w} : Edge{b, a, w};
}

struct Arc {
    VertexId to = 0;
    Weight w;
};

/// Immutable simple undirected graph with positive integer weights.
///
/// Weights are the input rationals multiplied by `scale()`. Each vertex keeps
/// the external label it had in its source file so results can be reported
/// in the caller's numbering.
class Graph {
public:
    Graph() = default;

    /// Normalizes the edge list: canonical orientation, duplicates keep the
    /// minimum weight. Self-loops, zero weights and out-of-range endpoints are
    /// rejected.
    Graph(std::size_t vertex_count, std::span<const Edge> edges, std::uint64_t scale = 1,
          std::vector<std::int64_t> labels = {})
        : n_(vertex_count), scale_(scale), labels_(std::move(labels)) {
        if (scale_ == 0) throw InputError("graph weight scale must be positive");
        if (labels_.empty()) {
            labels_.resize(n_);
            for (std::size_t i = 0; i < n_; ++i) labels_[i] = static_cast<std::int64_t>(i) + 1;
        }
        if (labels_.size() != n_) throw InputError("label count does not match vertex count");

        std::map<std::pair<VertexId, VertexId>, Weight> unique;
        for (const Edge& e : edges) {
            if (e.u >= n_ || e.v >= n_) throw InputError("edge endpoint out of range");
            if (e.u == e.v) throw InputError("self-loop on vertex " + std::to_string(labels_[e.u]));
            if (e.w.value() == 0 || e.w.is_infinite()) throw InputError("edge weight must be positive and finite");
            auto key = std::minmax(e.u, e.v);
            auto [it, inserted] = unique.emplace(std::pair(key.first, key.second), e.w);
            if (!inserted) it->second = std::min(it->second, e.w);
        }
        edges_.reserve(unique.size());
        adjacency_.assign(n_, {});
        for (const auto& [key, w] : unique) {
            edges_.push_back(Edge{key.first, key.second, w});
            adjacency_[key.first].push_back(Arc{key.second, w});
            adjacency_[key.second].push_back(Arc{key.first, w});
        }
        for (auto& arcs : adjacency_)
            std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.to < b.to; });
    }

    std::size_t vertex_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    std::uint64_t scale() const { return scale_; }

    bool contains(VertexId v) const { return v < n_; }

    std::span<const Edge> edges() const { return edges_; }
    std::span<const Arc> neighbors(VertexId v) const { return adjacency_.at(v); }

    std::optional<Weight> edge_weight(VertexId a, VertexId b) const {
        if (a >= n_ || b >= n_) return std::nullopt;
        const auto& arcs = adjacency_[a];
        auto it = std::lower_bound(arcs.begin(), arcs.end(), b, [](const Arc& x, VertexId t) { return x.to < t; });
        if (it == arcs.end() || it->to != b) return std::nullopt;
        return it->w;
    }

    std::int64_t label(VertexId v) const { return labels_.at(v); }
    std::span<const std::int64_t> labels() const { return labels_; }

    std::optional<VertexId> find_label(std::int64_t label) const {
        for (std::size_t i = 0; i < n_; ++i)
            if (labels_[i] == label) return static_cast<VertexId>(i);
        return std::nullopt;
    }

    /// Same topology with every weight multiplied by `factor` (> 0).
    Graph scaled(std::uint64_t factor) const {
        if (factor == 0) throw InputError("scaling factor must be positive");
        std::vector<Edge> scaled_edges(edges_.begin(), edges_.end());
        for (Edge& e : scaled_edges) e.w = e.w.scaled(factor);
        return Graph(n_, scaled_edges, scale_, labels_);
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.scale_ == b.scale_ && a.edges_ == b.edges_ && a.labels_ == b.labels_;
    }

private:
    std::size_t n_ = 0;
    std::uint64_t scale_ = 1;
    std::vector<std::int64_t> labels_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Arc>> adjacency_;
};

/// A tree spanning `terminals`. Degenerate trees (at most one terminal) have no edges.
struct SteinerTree {
    std::vector<VertexId> terminals;  // sorted, unique
    std::vector<Edge> edges;          // sorted by endpoints
    Weight weight;

    /// Endpoints of all edges plus the terminals, sorted.
    std::vector<VertexId> vertices() const {
        std::vector<VertexId> out(terminals);
        for (const Edge& e : edges) {
            out.push_back(e.u);
            out.push_back(e.v);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    friend bool operator==(const SteinerTree&, const SteinerTree&) = default;
};

inline SteinerTree empty_tree(std::vector<VertexId> terminals) {
    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
    return SteinerTree{std::move(terminals), {}, Weight::zero()};
}

/// Lexicographic order on sorted edge lists, used to break weight ties.
inline bool edges_lex_less(std::span<const Edge> a, std::span<const Edge> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), edge_endpoints_less);
}

/// Result of unioning two trees: connected (when they share a vertex) but possibly cyclic.
struct Subgraph {
    std::vector<VertexId> terminals;
    std::vector<Edge> edges;
    Weight weight;
    bool connected = true;
};

inline Subgraph graph_union(const SteinerTree& a, const SteinerTree& b) {
    Subgraph out;
    std::set_union(a.terminals.begin(), a.terminals.end(), b.terminals.begin(), b.terminals.end(),
                   std::back_inserter(out.terminals));
    std::set_union(a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end(), std::back_inserter(out.edges),
                   edge_endpoints_less);
    out.weight = Weight::zero();
    for (const Edge& e : out.edges) out.weight += e.w;

    auto va = a.vertices();
    auto vb = b.vertices();
    std::vector<VertexId> shared;
    std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(shared));
    out.connected = !shared.empty() || va.empty() || vb.empty();
    return out;
}

/// Reduces a connected candidate to a tree over its terminals: minimum
/// spanning forest (Kruskal, ties by endpoints), then repeated removal of
/// non-terminal leaves. Never increases weight.
inline SteinerTree prune_to_tree(const Subgraph& candidate) {
    std::vector<VertexId> terminals = candidate.terminals;
    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());

    std::vector<VertexId> verts(terminals);
    for (const Edge& e : candidate.edges) {
        verts.push_back(e.u);
        verts.push_back(e.v);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    auto local = [&](VertexId v) {
        return static_cast<std::size_t>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
    };

    std::vector<Edge> sorted = candidate.edges;
    std::sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.w, a.u, a.v) < std::tie(b.w, b.u, b.v);
    });
    UnionFind uf(verts.size());
    std::vector<Edge> forest;
    for (const Edge& e : sorted)
        if (uf.unite(local(e.u), local(e.v))) forest.push_back(e);

    for (std::size_t i = 1; i < terminals.size(); ++i)
        if (!uf.same(local(terminals[0]), local(terminals[i])))
            throw InfeasibleError("candidate subgraph does not connect its terminals");

    std::vector<int> degree(verts.size(), 0);
    std::vector<char> is_terminal(verts.size(), 0);
    for (VertexId t : terminals) is_terminal[local(t)] = 1;
    for (const Edge& e : forest) {
        ++degree[local(e.u)];
        ++degree[local(e.v)];
    }
    std::vector<char> alive(forest.size(), 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < forest.size(); ++i) {
            if (!alive[i]) continue;
            std::size_t a = local(forest[i].u), b = local(forest[i].v);
            bool a_leaf = degree[a] == 1 && !is_terminal[a];
            bool b_leaf = degree[b] == 1 && !is_terminal[b];
            if (a_leaf || b_leaf) {
                alive[i] = 0;
                --degree[a];
                --degree[b];
                changed = true;
            }
        }
    }

    SteinerTree out;
    out.terminals = std::move(terminals);
    out.weight = Weight::zero();
    for (std::size_t i = 0; i < forest.size(); ++i) {
        if (!alive[i]) continue;
        out.edges.push_back(forest[i]);
        out.weight += forest[i].w;
    }
    std::sort(out.edges.begin(), out.edges.end(), edge_endpoints_less);
    return out;
}

/// Returns a description of the first structural defect, or nullopt for a
/// valid tree: acyclic, connected, spans its terminals, weight = edge sum,
/// and (if a graph is given) every edge exists in it with the stored weight.
inline std::optional<std::string> tree_defect(const SteinerTree& tree, const Graph* graph = nullptr) {
    if (!std::is_sorted(tree.terminals.begin(), tree.terminals.end()) ||
        std::adjacent_find(tree.terminals.begin(), tree.terminals.end()) != tree.terminals.end())
        return "terminals not strictly ascending";
    Weight sum = Weight::zero();
    for (const Edge& e : tree.edges) {
        if (e.u >= e.v) return "edge not canonical";
        if (graph) {
            auto w = graph->edge_weight(e.u, e.v);
            if (!w || *w != e.w) return "edge not in graph";
        }
        sum += e.w;
    }
    if (sum != tree.weight) return "weight differs from edge sum";
    if (tree.edges.empty()) {
        if (tree.terminals.size() > 1) return "multiple terminals but no edges";
        return std::nullopt;
    }
    auto verts = tree.vertices();
    if (tree.edges.size() + 1 != verts.size()) return "edge count is not vertex count - 1";
    auto local = [&](VertexId v) {
        return static_cast<std::size_t>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
    };
    UnionFind uf(verts.size());
    for (const Edge& e : tree.edges)
        if (!uf.unite(local(e.u), local(e.v))) return "cycle";
    for (std::size_t i = 1; i < verts.size(); ++i)
        if (!uf.same(0, i)) return "disconnected";
    return std::nullopt;
}

/// Single-source shortest paths. Among equal-length paths the predecessor
/// with the smallest VertexId wins.
struct ShortestPathTree {
    VertexId source = 0;
    std::vector<Weight> dist;
    std::vector<VertexId> pred;
};

inline ShortestPathTree dijkstra(const Graph& g, VertexId source) {
    const std::size_t n = g.vertex_count();
    ShortestPathTree spt{source, std::vector<Weight>(n, Weight::infinity()), std::vector<VertexId>(n, kNoVertex)};
    std::vector<char> settled(n, 0);
    using Item = std::pair<Weight, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    spt.dist[source] = Weight::zero();
    heap.emplace(Weight::zero(), source);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (settled[u] || d != spt.dist[u]) continue;
        settled[u] = 1;
        for (const Arc& a : g.neighbors(u)) {
            if (settled[a.to]) continue;
            Weight nd = d + a.w;
            if (nd < spt.dist[a.to]) {
                spt.dist[a.to] = nd;
                spt.pred[a.to] = u;
                heap.emplace(nd, a.to);
            } else if (nd == spt.dist[a.to] && u < spt.pred[a.to]) {
                spt.pred[a.to] = u;
            }
        }
    }
    return spt;
}

/// Minimum-weight u-v path as a two-terminal Steiner tree.
inline SteinerTree shortest_path(const Graph& g, VertexId u, VertexId v) {
    if (!g.contains(u) || !g.contains(v)) throw InputError("shortest_path: vertex out of range");
    if (u == v) throw InputError("shortest_path: endpoints must differ");
    ShortestPathTree spt = dijkstra(g, u);
    if (spt.dist[v].is_infinite())
        throw InfeasibleError("vertices " + std::to_string(g.label(u)) + " and " + std::to_string(g.label(v)) +
                              " are in different components");
    SteinerTree tree;
    tree.terminals = {std::min(u, v), std::max(u, v)};
    tree.weight = spt.dist[v];
    for (VertexId x = v; x != u; x = spt.pred[x]) tree.edges.push_back(make_edge(spt.pred[x], x, *g.edge_weight(spt.pred[x], x)));
    std::sort(tree.edges.begin(), tree.edges.end(), edge_endpoints_less);
    return tree;
}

/// Connected-component id per vertex (ids in order of smallest member).
inline std::vector<std::size_t> component_ids(const Graph& g) {
    UnionFind uf(g.vertex_count());
    for (const Edge& e : g.edges()) uf.unite(e.u, e.v);
    std::vector<std::size_t> ids(g.vertex_count());
    std::map<std::size_t, std::size_t> rename;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        auto [it, _] = rename.emplace(uf.find(v), rename.size());
        ids[v] = it->second;
    }
    return ids;
}

inline bool is_connected(const Graph& g) {
    auto ids = component_ids(g);
    return std::all_of(ids.begin(), ids.end(), [](std::size_t c) { return c == 0; });
}

}  // namespace steiner
