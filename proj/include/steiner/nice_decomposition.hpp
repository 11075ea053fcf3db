#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "steiner/decomposition.hpp"

namespace steiner {

/// How a node's bag relates to its children.
///   Leaf:      no children.
///   Introduce: one child, bag = child bag + {vertex}.
///   Forget:    one child, bag = child bag - {vertex}.
///   Join:      two children with bags identical to this one.
enum class NodeKind : std::uint8_t { Leaf, Introduce, Forget, Join };

inline const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::Leaf: return "leaf";
        case NodeKind::Introduce: return "introduce";
        case NodeKind::Forget: return "forget";
        case NodeKind::Join: return "join";
    }
    return "?";
}

class NiceTreeDecomposition {
public:
    NiceTreeDecomposition() = default;

    /// `kind_vertex[i]` is the introduced/forgotten vertex, kNoVertex otherwise.
    NiceTreeDecomposition(TreeDecomposition td, std::vector<NodeKind> kinds, std::vector<VertexId> kind_vertex)
        : td_(std::move(td)), kinds_(std::move(kinds)), kind_vertex_(std::move(kind_vertex)) {
        if (kinds_.size() != td_.size() || kind_vertex_.size() != td_.size())
            throw InputError("node kind annotations do not match node count");
    }

    const TreeDecomposition& tree() const { return td_; }
    NodeId size() const { return td_.size(); }
    NodeId root() const { return td_.root(); }
    std::span<const VertexId> bag(NodeId i) const { return td_.bag(i); }
    NodeId parent(NodeId i) const { return td_.parent(i); }
    std::span<const NodeId> children(NodeId i) const { return td_.children(i); }
    std::uint32_t depth(NodeId i) const { return td_.depth(i); }
    int width() const { return td_.width(); }
    std::uint32_t height() const { return td_.height(); }

    NodeKind kind(NodeId i) const { return kinds_.at(i); }
    VertexId kind_vertex(NodeId i) const { return kind_vertex_.at(i); }

    friend bool operator==(const NiceTreeDecomposition&, const NiceTreeDecomposition&) = default;

private:
    TreeDecomposition td_;
    std::vector<NodeKind> kinds_;
    std::vector<VertexId> kind_vertex_;
};

/// Checks every node against its kind's structural equation.
inline std::vector<Violation> validate_nice(const NiceTreeDecomposition& ntd) {
    std::vector<Violation> out;
    auto fail = [&](NodeId i, const std::string& what) {
        out.push_back({Violation::Kind::NiceStructure, "node " + std::to_string(i) + ": " + what, ntd.kind_vertex(i),
                       kNoVertex, i});
    };
    for (NodeId i = 0; i < ntd.size(); ++i) {
        auto kids = ntd.children(i);
        auto bag = ntd.bag(i);
        VertexId v = ntd.kind_vertex(i);
        switch (ntd.kind(i)) {
            case NodeKind::Leaf:
                if (!kids.empty()) fail(i, "leaf has children");
                break;
            case NodeKind::Join:
                if (kids.size() != 2) {
                    fail(i, "join needs exactly two children");
                    break;
                }
                for (NodeId c : kids) {
                    auto cb = ntd.bag(c);
                    if (!std::equal(bag.begin(), bag.end(), cb.begin(), cb.end())) fail(i, "join child bag differs");
                }
                break;
            case NodeKind::Introduce:
            case NodeKind::Forget: {
                if (kids.size() != 1) {
                    fail(i, "introduce/forget needs exactly one child");
                    break;
                }
                bool introduce = ntd.kind(i) == NodeKind::Introduce;
                auto larger = introduce ? bag : ntd.bag(kids[0]);
                auto smaller = introduce ? ntd.bag(kids[0]) : bag;
                std::vector<VertexId> expected(smaller.begin(), smaller.end());
                if (std::binary_search(expected.begin(), expected.end(), v)) {
                    fail(i, "kind vertex already present in the smaller bag");
                    break;
                }
                expected.insert(std::lower_bound(expected.begin(), expected.end(), v), v);
                if (!std::equal(expected.begin(), expected.end(), larger.begin(), larger.end()))
                    fail(i, "bags differ by more than the kind vertex");
                break;
            }
        }
    }
    return out;
}

/// Size bound committed for to_nice: 4 * (sum over tree edges of the bag
/// symmetric difference + number of nodes).
inline std::size_t nice_size_bound(const TreeDecomposition& td) {
    std::size_t diff = 0;
    for (NodeId i = 0; i < td.size(); ++i) {
        NodeId p = td.parent(i);
        if (p == kNoNode) continue;
        auto a = td.bag(i), b = td.bag(p);
        std::vector<VertexId> sym;
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(sym));
        diff += sym.size();
    }
    return 4 * (diff + td.size());
}

/// Converts a rooted decomposition to nice form. Each tree edge becomes a
/// chain that first forgets the child-only vertices, then introduces the
/// parent-only ones; nodes with k > 1 children become a left-deep join chain.
/// Nodes are numbered in preorder, root = 0.
inline NiceTreeDecomposition to_nice(const TreeDecomposition& td) {
    if (td.empty()) return {};
    std::vector<std::vector<VertexId>> bags;
    std::vector<std::vector<NodeId>> kids;
    std::vector<NodeKind> kinds;
    std::vector<VertexId> kvert;
    auto add = [&](std::vector<VertexId> bag, NodeKind kind, VertexId v, std::vector<NodeId> children) {
        bags.push_back(std::move(bag));
        kids.push_back(std::move(children));
        kinds.push_back(kind);
        kvert.push_back(v);
        return static_cast<NodeId>(bags.size() - 1);
    };
    auto chain = [&](std::span<const VertexId> parent_bag, std::span<const VertexId> child_bag, NodeId below) {
        std::vector<VertexId> current(child_bag.begin(), child_bag.end());
        std::vector<VertexId> drop, gain;
        std::set_difference(child_bag.begin(), child_bag.end(), parent_bag.begin(), parent_bag.end(), std::back_inserter(drop));
        std::set_difference(parent_bag.begin(), parent_bag.end(), child_bag.begin(), child_bag.end(), std::back_inserter(gain));
        for (VertexId v : drop) {
            current.erase(std::lower_bound(current.begin(), current.end(), v));
            below = add(current, NodeKind::Forget, v, {below});
        }
        for (VertexId v : gain) {
            current.insert(std::lower_bound(current.begin(), current.end(), v), v);
            below = add(current, NodeKind::Introduce, v, {below});
        }
        return below;
    };

    // Iterative postorder over td.
    std::vector<NodeId> post;
    {
        std::vector<std::pair<NodeId, bool>> stack{{td.root(), false}};
        while (!stack.empty()) {
            auto [x, expanded] = stack.back();
            stack.pop_back();
            if (expanded) {
                post.push_back(x);
                continue;
            }
            stack.push_back({x, true});
            auto ch = td.children(x);
            for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back({*it, false});
        }
    }
    std::vector<NodeId> top(td.size(), kNoNode);
    for (NodeId x : post) {
        auto bag = td.bag(x);
        std::vector<NodeId> tops;
        for (NodeId c : td.children(x)) tops.push_back(chain(bag, td.bag(c), top[c]));
        std::vector<VertexId> b(bag.begin(), bag.end());
        if (tops.empty()) {
            top[x] = add(b, NodeKind::Leaf, kNoVertex, {});
        } else {
            NodeId acc = tops[0];
            for (std::size_t i = 1; i < tops.size(); ++i) acc = add(b, NodeKind::Join, kNoVertex, {acc, tops[i]});
            top[x] = acc;
        }
    }

    // Renumber in preorder from the new root.
    const NodeId total = static_cast<NodeId>(bags.size());
    std::vector<NodeId> rename(total, kNoNode);
    std::vector<NodeId> pre;
    std::vector<NodeId> stack{top[td.root()]};
    while (!stack.empty()) {
        NodeId x = stack.back();
        stack.pop_back();
        rename[x] = static_cast<NodeId>(pre.size());
        pre.push_back(x);
        for (auto it = kids[x].rbegin(); it != kids[x].rend(); ++it) stack.push_back(*it);
    }
    std::vector<std::vector<VertexId>> out_bags(total);
    std::vector<NodeId> out_parent(total, kNoNode);
    std::vector<NodeKind> out_kinds(total);
    std::vector<VertexId> out_kv(total);
    for (NodeId old : pre) {
        NodeId id = rename[old];
        out_bags[id] = bags[old];
        out_kinds[id] = kinds[old];
        out_kv[id] = kvert[old];
        for (NodeId c : kids[old]) out_parent[rename[c]] = id;
    }
    return NiceTreeDecomposition(TreeDecomposition(std::move(out_bags), std::move(out_parent)), std::move(out_kinds),
                                 std::move(out_kv));
}

/// Per vertex, the node closest to the root whose bag contains it.
using InducedRootMap = std::vector<NodeId>;

inline InducedRootMap induced_roots(const TreeDecomposition& td, std::size_t vertex_count) {
    InducedRootMap roots(vertex_count, kNoNode);
    for (NodeId i = 0; i < td.size(); ++i) {
        NodeId p = td.parent(i);
        for (VertexId v : td.bag(i)) {
            if (v >= vertex_count) throw InputError("bag holds vertex outside the graph");
            if (p != kNoNode && td.bag_contains(p, v)) continue;
            if (roots[v] != kNoNode) throw InputError("vertex " + std::to_string(v) + " has a disconnected bag set");
            roots[v] = i;
        }
    }
    for (VertexId v = 0; v < vertex_count; ++v)
        if (roots[v] == kNoNode) throw InputError("vertex " + std::to_string(v) + " appears in no bag");
    return roots;
}

inline InducedRootMap induced_roots(const NiceTreeDecomposition& ntd, std::size_t vertex_count) {
    return induced_roots(ntd.tree(), vertex_count);
}

/// Lowest common ancestor of a non-empty node set, by depth-aligned climbing.
inline NodeId lca(const TreeDecomposition& td, std::span<const NodeId> nodes) {
    if (nodes.empty()) throw InputError("lca of an empty node set");
    NodeId acc = nodes[0];
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        NodeId b = nodes[i];
        while (td.depth(acc) > td.depth(b)) acc = td.parent(acc);
        while (td.depth(b) > td.depth(acc)) b = td.parent(b);
        while (acc != b) {
            acc = td.parent(acc);
            b = td.parent(b);
        }
    }
    return acc;
}

inline NodeId lca(const NiceTreeDecomposition& ntd, std::span<const NodeId> nodes) { return lca(ntd.tree(), nodes); }

/// Nodes on the tree path from a to b, both inclusive.
inline std::vector<NodeId> tree_path(const TreeDecomposition& td, NodeId a, NodeId b) {
    NodeId pair[2] = {a, b};
    NodeId top = lca(td, pair);
    std::vector<NodeId> up, down;
    for (NodeId x = a; x != top; x = td.parent(x)) up.push_back(x);
    up.push_back(top);
    for (NodeId x = b; x != top; x = td.parent(x)) down.push_back(x);
    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
}

}  // namespace steiner
