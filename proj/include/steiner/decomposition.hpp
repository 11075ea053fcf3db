#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "steiner/graph.hpp"

namespace steiner {

using NodeId = std::uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// Rooted tree of bags. Only the tree shape is enforced on construction; the
/// three decomposition conditions are checked by validate_decomposition().
class TreeDecomposition {
public:
    TreeDecomposition() = default;

    /// `parent[i] == kNoNode` marks the root. Bags are sorted on entry.
    TreeDecomposition(std::vector<std::vector<VertexId>> bags, std::vector<NodeId> parent)
        : bags_(std::move(bags)), parent_(std::move(parent)) {
        if (bags_.size() != parent_.size()) throw InputError("bag count and parent count differ");
        for (auto& bag : bags_) {
            std::sort(bag.begin(), bag.end());
            bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
        }
        children_.assign(bags_.size(), {});
        root_ = kNoNode;
        for (NodeId i = 0; i < size(); ++i) {
            if (parent_[i] == kNoNode) {
                if (root_ != kNoNode) throw InputError("tree decomposition has more than one root");
                root_ = i;
            } else {
                if (parent_[i] >= size() || parent_[i] == i) throw InputError("invalid parent link at node " + std::to_string(i));
                children_[parent_[i]].push_back(i);
            }
        }
        if (!bags_.empty() && root_ == kNoNode) throw InputError("tree decomposition has no root");

        depth_.assign(size(), 0);
        std::size_t reached = 0;
        if (root_ != kNoNode) {
            std::deque<NodeId> queue{root_};
            while (!queue.empty()) {
                NodeId x = queue.front();
                queue.pop_front();
                ++reached;
                height_ = std::max(height_, depth_[x]);
                for (NodeId c : children_[x]) {
                    depth_[c] = depth_[x] + 1;
                    queue.push_back(c);
                }
            }
        }
        if (reached != size()) throw InputError("parent links contain a cycle");
    }

    NodeId size() const { return static_cast<NodeId>(bags_.size()); }
    bool empty() const { return bags_.empty(); }
    NodeId root() const { return root_; }

    std::span<const VertexId> bag(NodeId i) const { return bags_.at(i); }
    NodeId parent(NodeId i) const { return parent_.at(i); }
    std::span<const NodeId> children(NodeId i) const { return children_.at(i); }
    std::uint32_t depth(NodeId i) const { return depth_.at(i); }

    bool bag_contains(NodeId i, VertexId v) const { return std::binary_search(bags_[i].begin(), bags_[i].end(), v); }

    /// Largest bag size minus one (-1 for an empty decomposition).
    int width() const {
        std::size_t widest = 0;
        for (const auto& b : bags_) widest = std::max(widest, b.size());
        return static_cast<int>(widest) - 1;
    }

    /// Longest root-to-leaf path, in edges.
    std::uint32_t height() const { return height_; }

    friend bool operator==(const TreeDecomposition& a, const TreeDecomposition& b) {
        return a.bags_ == b.bags_ && a.parent_ == b.parent_;
    }

private:
    std::vector<std::vector<VertexId>> bags_;
    std::vector<NodeId> parent_;
    std::vector<std::vector<NodeId>> children_;
    std::vector<std::uint32_t> depth_;
    NodeId root_ = kNoNode;
    std::uint32_t height_ = 0;
};

enum class Heuristic { MinDegree, MinFill };

namespace detail {

// Tree built from an elimination ordering, before rooting.
struct UnrootedTd {
    std::vector<std::vector<VertexId>> bags;
    std::vector<std::set<NodeId>> adj;
    std::vector<char> alive;
};

// Contracts every tree edge whose bags are nested into the larger bag.
inline void contract_nested(UnrootedTd& t) {
    auto subset = [&](NodeId a, NodeId b) {
        return std::includes(t.bags[b].begin(), t.bags[b].end(), t.bags[a].begin(), t.bags[a].end());
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (NodeId x = 0; x < t.bags.size() && !changed; ++x) {
            if (!t.alive[x]) continue;
            for (NodeId y : t.adj[x]) {
                if (!subset(x, y)) continue;
                for (NodeId z : t.adj[x]) {
                    if (z == y) continue;
                    t.adj[z].erase(x);
                    t.adj[z].insert(y);
                    t.adj[y].insert(z);
                }
                t.adj[y].erase(x);
                t.adj[x].clear();
                t.alive[x] = 0;
                changed = true;
                break;
            }
        }
    }
}

}  // namespace detail

/// Builds a tree decomposition from a greedy elimination ordering. Ties go to
/// the smallest VertexId. Nested neighbouring bags are contracted, and the
/// result is rooted at the lowest-numbered bag containing vertex 0.
inline TreeDecomposition decompose(const Graph& g, Heuristic heuristic = Heuristic::MinDegree) {
    const std::size_t n = g.vertex_count();
    if (n == 0) throw InputError("cannot decompose an empty graph");

    std::vector<std::set<VertexId>> adj(n);
    for (const Edge& e : g.edges()) {
        adj[e.u].insert(e.v);
        adj[e.v].insert(e.u);
    }
    std::vector<char> eliminated(n, 0);
    std::vector<std::size_t> position(n, 0);
    std::vector<VertexId> order;
    std::vector<std::vector<VertexId>> higher(n);  // neighbours at elimination time

    auto fill_in = [&](VertexId v) {
        std::size_t missing = 0;
        for (auto a = adj[v].begin(); a != adj[v].end(); ++a)
            for (auto b = std::next(a); b != adj[v].end(); ++b)
                if (!adj[*a].count(*b)) ++missing;
        return missing;
    };

    for (std::size_t step = 0; step < n; ++step) {
        VertexId best = kNoVertex;
        std::size_t best_score = std::numeric_limits<std::size_t>::max();
        for (VertexId v = 0; v < n; ++v) {
            if (eliminated[v]) continue;
            std::size_t score = heuristic == Heuristic::MinDegree ? adj[v].size() : fill_in(v);
            if (score < best_score) {
                best_score = score;
                best = v;
            }
        }
        higher[best].assign(adj[best].begin(), adj[best].end());
        for (VertexId a : higher[best]) {
            adj[a].erase(best);
            for (VertexId b : higher[best])
                if (a != b) adj[a].insert(b);
        }
        adj[best].clear();
        eliminated[best] = 1;
        position[best] = step;
        order.push_back(best);
    }

    // One node per vertex; node id == vertex id.
    detail::UnrootedTd t;
    t.bags.resize(n);
    t.adj.resize(n);
    t.alive.assign(n, 1);
    std::vector<NodeId> component_roots;
    for (VertexId v : order) {
        t.bags[v] = higher[v];
        t.bags[v].push_back(v);
        std::sort(t.bags[v].begin(), t.bags[v].end());
        if (higher[v].empty()) {
            component_roots.push_back(v);
            continue;
        }
        VertexId next = *std::min_element(higher[v].begin(), higher[v].end(),
                                          [&](VertexId a, VertexId b) { return position[a] < position[b]; });
        t.adj[v].insert(next);
        t.adj[next].insert(v);
    }
    // Disconnected graphs: hang every component under the first one.
    for (std::size_t i = 1; i < component_roots.size(); ++i) {
        t.adj[component_roots[0]].insert(component_roots[i]);
        t.adj[component_roots[i]].insert(component_roots[0]);
    }
    detail::contract_nested(t);

    std::vector<NodeId> rename(n, kNoNode);
    NodeId count = 0;
    for (NodeId x = 0; x < n; ++x)
        if (t.alive[x]) rename[x] = count++;
    NodeId root_old = kNoNode;
    for (NodeId x = 0; x < n && root_old == kNoNode; ++x)
        if (t.alive[x] && std::binary_search(t.bags[x].begin(), t.bags[x].end(), VertexId{0})) root_old = x;

    std::vector<std::vector<VertexId>> bags(count);
    std::vector<NodeId> parent(count, kNoNode);
    std::vector<char> seen(n, 0);
    std::deque<NodeId> queue{root_old};
    seen[root_old] = 1;
    while (!queue.empty()) {
        NodeId x = queue.front();
        queue.pop_front();
        bags[rename[x]] = t.bags[x];
        for (NodeId y : t.adj[x]) {
            if (seen[y]) continue;
            seen[y] = 1;
            parent[rename[y]] = rename[x];
            queue.push_back(y);
        }
    }
    return TreeDecomposition(std::move(bags), std::move(parent));
}

/// One failed decomposition condition, with a witness.
struct Violation {
    enum class Kind { VertexCoverage, EdgeCoverage, Connectedness, NiceStructure };
    Kind kind;
    std::string message;
    VertexId vertex = kNoVertex;
    VertexId other = kNoVertex;
    NodeId node = kNoNode;
    NodeId other_node = kNoNode;
};

inline const char* to_string(Violation::Kind k) {
    switch (k) {
        case Violation::Kind::VertexCoverage: return "vertex-coverage";
        case Violation::Kind::EdgeCoverage: return "edge-coverage";
        case Violation::Kind::Connectedness: return "connectedness";
        case Violation::Kind::NiceStructure: return "nice-structure";
    }
    return "?";
}

/// Checks vertex coverage, edge coverage and connectedness. Empty result means valid.
inline std::vector<Violation> validate_decomposition(const Graph& g, const TreeDecomposition& td) {
    std::vector<Violation> out;
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<NodeId>> nodes_of(n);
    for (NodeId i = 0; i < td.size(); ++i) {
        for (VertexId v : td.bag(i)) {
            if (v >= n) {
                out.push_back({Violation::Kind::VertexCoverage,
                               "node " + std::to_string(i) + " holds unknown vertex " + std::to_string(v), v, kNoVertex, i});
                continue;
            }
            nodes_of[v].push_back(i);
        }
    }
    for (VertexId v = 0; v < n; ++v)
        if (nodes_of[v].empty())
            out.push_back({Violation::Kind::VertexCoverage, "vertex " + std::to_string(g.label(v)) + " is in no bag", v});

    for (const Edge& e : g.edges()) {
        const auto& a = nodes_of[e.u];
        const auto& b = nodes_of[e.v];
        std::vector<NodeId> common;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
        if (common.empty())
            out.push_back({Violation::Kind::EdgeCoverage,
                           "edge (" + std::to_string(g.label(e.u)) + "," + std::to_string(g.label(e.v)) + ") is in no bag",
                           e.u, e.v});
    }

    for (VertexId v = 0; v < n; ++v) {
        std::vector<NodeId> local_roots;
        for (NodeId i : nodes_of[v]) {
            NodeId p = td.parent(i);
            if (p == kNoNode || !td.bag_contains(p, v)) local_roots.push_back(i);
        }
        if (local_roots.size() > 1)
            out.push_back({Violation::Kind::Connectedness,
                           "bags holding vertex " + std::to_string(g.label(v)) + " are disconnected (nodes " +
                               std::to_string(local_roots[0]) + " and " + std::to_string(local_roots[1]) + ")",
                           v, kNoVertex, local_roots[0], local_roots[1]});
    }
    return out;
}

/// True iff every u-v path in g meets `separator`. An endpoint inside the
/// separator counts as separated.
inline bool is_separator(const Graph& g, std::span<const VertexId> separator, VertexId u, VertexId v) {
    std::vector<char> blocked(g.vertex_count(), 0);
    for (VertexId c : separator) {
        if (c == u || c == v) return true;
        blocked.at(c) = 1;
    }
    if (u == v) return false;
    std::vector<char> seen(g.vertex_count(), 0);
    std::deque<VertexId> queue{u};
    seen[u] = 1;
    while (!queue.empty()) {
        VertexId x = queue.front();
        queue.pop_front();
        for (const Arc& a : g.neighbors(x)) {
            if (blocked[a.to] || seen[a.to]) continue;
            if (a.to == v) return false;
            seen[a.to] = 1;
            queue.push_back(a.to);
        }
    }
    return true;
}

}  // namespace steiner
