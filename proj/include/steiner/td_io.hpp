#pragma once

// Line-oriented decomposition files, close to the PACE .td convention:
//
//   c steiner-td 1
//   s td <nodes> <max-bag-size> <vertices>
//   r <root>
//   b <node> <v> <v> ...          one per node, nodes and vertices 1-based
//   e <parent> <child>            one per tree edge
//   k <node> <kind> [<v>]         nice decompositions only

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "steiner/nice_decomposition.hpp"

namespace steiner {

inline constexpr int kTdFormatVersion = 1;

namespace detail {

inline void write_td_body(std::ostream& out, const TreeDecomposition& td, std::size_t vertex_count) {
    out << "c steiner-td " << kTdFormatVersion << "\n";
    out << "s td " << td.size() << " " << td.width() + 1 << " " << vertex_count << "\n";
    if (!td.empty()) out << "r " << td.root() + 1 << "\n";
    for (NodeId i = 0; i < td.size(); ++i) {
        out << "b " << i + 1;
        for (VertexId v : td.bag(i)) out << " " << v + 1;
        out << "\n";
    }
    for (NodeId i = 0; i < td.size(); ++i)
        if (td.parent(i) != kNoNode) out << "e " << td.parent(i) + 1 << " " << i + 1 << "\n";
}

}  // namespace detail

inline void write_td(std::ostream& out, const TreeDecomposition& td, std::size_t vertex_count) {
    detail::write_td_body(out, td, vertex_count);
}

inline void write_td(std::ostream& out, const NiceTreeDecomposition& ntd, std::size_t vertex_count) {
    detail::write_td_body(out, ntd.tree(), vertex_count);
    for (NodeId i = 0; i < ntd.size(); ++i) {
        out << "k " << i + 1 << " " << to_string(ntd.kind(i));
        if (ntd.kind_vertex(i) != kNoVertex) out << " " << ntd.kind_vertex(i) + 1;
        out << "\n";
    }
}

struct TdFile {
    TreeDecomposition td;
    std::optional<NiceTreeDecomposition> nice;  // present when every node has a kind line
    std::size_t vertex_count = 0;
};

inline TdFile read_td(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::size_t nodes = 0;
    bool saw_header = false;
    NodeId root = kNoNode;
    std::vector<std::vector<VertexId>> bags;
    std::vector<NodeId> parent;
    std::vector<std::optional<std::pair<NodeKind, VertexId>>> kinds;
    TdFile out;
    auto fail = [&](const std::string& what) -> void { throw InputError("td line " + std::to_string(lineno) + ": " + what); };
    auto node_id = [&](long long x) {
        if (x < 1 || static_cast<std::size_t>(x) > nodes) fail("node id out of range");
        return static_cast<NodeId>(x - 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream is(line);
        std::string tag;
        if (!(is >> tag) || tag == "c") continue;
        if (tag == "s") {
            std::string td_tag;
            std::size_t max_bag = 0;
            if (!(is >> td_tag >> nodes >> max_bag >> out.vertex_count) || td_tag != "td") fail("bad header");
            saw_header = true;
            bags.assign(nodes, {});
            parent.assign(nodes, kNoNode);
            kinds.assign(nodes, std::nullopt);
            continue;
        }
        if (!saw_header) fail("content before the 's td' header");
        long long a = 0, b = 0;
        if (tag == "r") {
            if (!(is >> a)) fail("bad root line");
            root = node_id(a);
        } else if (tag == "b") {
            if (!(is >> a)) fail("bad bag line");
            NodeId id = node_id(a);
            while (is >> b) {
                if (b < 1 || static_cast<std::size_t>(b) > out.vertex_count) fail("vertex out of range");
                bags[id].push_back(static_cast<VertexId>(b - 1));
            }
        } else if (tag == "e") {
            if (!(is >> a >> b)) fail("bad edge line");
            NodeId child = node_id(b);
            if (parent[child] != kNoNode) fail("node has two parents");
            parent[child] = node_id(a);
        } else if (tag == "k") {
            std::string kind;
            if (!(is >> a >> kind)) fail("bad kind line");
            NodeId id = node_id(a);
            VertexId v = kNoVertex;
            NodeKind k{};
            if (kind == "leaf") k = NodeKind::Leaf;
            else if (kind == "join") k = NodeKind::Join;
            else if (kind == "introduce" || kind == "forget") {
                k = kind == "introduce" ? NodeKind::Introduce : NodeKind::Forget;
                if (!(is >> b) || b < 1) fail("kind line lacks its vertex");
                v = static_cast<VertexId>(b - 1);
            } else fail("unknown node kind " + kind);
            kinds[id] = std::pair(k, v);
        } else {
            fail("unknown line tag " + tag);
        }
    }
    if (!saw_header) throw InputError("td input has no 's td' header");
    if (root != kNoNode && parent[root] != kNoNode) throw InputError("declared root has a parent");
    out.td = TreeDecomposition(std::move(bags), std::move(parent));
    if (nodes > 0 && std::all_of(kinds.begin(), kinds.end(), [](const auto& k) { return k.has_value(); })) {
        std::vector<NodeKind> ks;
        std::vector<VertexId> vs;
        for (const auto& k : kinds) {
            ks.push_back(k->first);
            vs.push_back(k->second);
        }
        out.nice = NiceTreeDecomposition(out.td, std::move(ks), std::move(vs));
    }
    return out;
}

}  // namespace steiner
