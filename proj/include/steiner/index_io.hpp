#pragma once

// Binary index format (all integers little-endian, fixed width):
//
//   "STDX"  u16 version  u8[32] graph-hash  u32 l  u32 width  u32 height  u32 node-count
//   node-count times:
//     u64 record-length, then the record:
//       u32 parent (0xFFFFFFFF = root)  u8 kind  u32 kind-vertex
//       u32 bag-size  u32[bag-size] vertices
//       u32 entry-count, per entry:
//         u32 key-size  u32[key-size]  u64 weight (0xFF..FF = infeasible)
//         u32 edge-count  (u32 u, u32 v, u64 w)[edge-count]

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "steiner/bag_index.hpp"

namespace steiner {

inline constexpr char kIndexMagic[4] = {'S', 'T', 'D', 'X'};
inline constexpr std::uint16_t kIndexVersion = 1;

inline std::string save_index(const SteinerIndex& idx) {
    using detail::put_u32;
    using detail::put_u64;
    std::string out(kIndexMagic, 4);
    out.push_back(static_cast<char>(kIndexVersion & 0xFF));
    out.push_back(static_cast<char>(kIndexVersion >> 8));
    out.append(reinterpret_cast<const char*>(idx.hash.data()), idx.hash.size());
    put_u32(out, static_cast<std::uint32_t>(idx.l));
    put_u32(out, static_cast<std::uint32_t>(idx.meta.width));
    put_u32(out, idx.meta.height);
    put_u32(out, idx.ntd.size());
    for (NodeId i = 0; i < idx.ntd.size(); ++i) {
        std::string rec;
        put_u32(rec, idx.ntd.parent(i));
        rec.push_back(static_cast<char>(idx.ntd.kind(i)));
        put_u32(rec, idx.ntd.kind_vertex(i));
        put_u32(rec, static_cast<std::uint32_t>(idx.ntd.bag(i).size()));
        for (VertexId v : idx.ntd.bag(i)) put_u32(rec, v);
        const BagTable& table = idx.tables.at(i);
        put_u32(rec, static_cast<std::uint32_t>(table.entries.size()));
        for (const auto& [key, entry] : table.entries) {
            put_u32(rec, static_cast<std::uint32_t>(key.size()));
            for (VertexId v : key.vertices()) put_u32(rec, v);
            put_u64(rec, entry.weight.value());
            if (!entry.feasible()) {
                put_u32(rec, 0);
                continue;
            }
            put_u32(rec, static_cast<std::uint32_t>(entry.tree->edges.size()));
            for (const Edge& e : entry.tree->edges) {
                put_u32(rec, e.u);
                put_u32(rec, e.v);
                put_u64(rec, e.w.value());
            }
        }
        put_u64(out, rec.size());
        out += rec;
    }
    return out;
}

namespace detail {

class ByteReader {
public:
    explicit ByteReader(std::string_view data) : data_(data) {}

    std::size_t remaining() const { return data_.size() - pos_; }
    std::size_t position() const { return pos_; }

    std::string_view take(std::size_t n, const char* what) {
        if (remaining() < n) throw FormatError(std::string("index truncated while reading ") + what);
        auto out = data_.substr(pos_, n);
        pos_ += n;
        return out;
    }

    std::uint8_t u8(const char* what) { return static_cast<std::uint8_t>(take(1, what)[0]); }

    std::uint16_t u16(const char* what) {
        auto b = take(2, what);
        return static_cast<std::uint16_t>(static_cast<std::uint8_t>(b[0]) | static_cast<std::uint8_t>(b[1]) << 8);
    }

    std::uint32_t u32(const char* what) {
        auto b = take(4, what);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = v << 8 | static_cast<std::uint8_t>(b[static_cast<std::size_t>(i)]);
        return v;
    }

    std::uint64_t u64(const char* what) {
        auto b = take(8, what);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = v << 8 | static_cast<std::uint8_t>(b[static_cast<std::size_t>(i)]);
        return v;
    }

    /// A count whose items need at least `item_bytes` each; rejects counts the
    /// remaining input cannot hold.
    std::uint32_t count(std::size_t item_bytes, const char* what) {
        std::uint32_t n = u32(what);
        if (item_bytes != 0 && n > remaining() / item_bytes)
            throw FormatError(std::string("index truncated: ") + what + " exceeds remaining bytes");
        return n;
    }

private:
    std::string_view data_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses an index and binds it to `g`. Refuses a different graph, another
/// format version, and any truncated or inconsistent record.
inline SteinerIndex load_index(std::string_view bytes, const Graph& g) {
    detail::ByteReader in(bytes);
    if (in.take(4, "magic") != std::string_view(kIndexMagic, 4)) throw FormatError("not an index file (bad magic)");
    std::uint16_t version = in.u16("version");
    if (version != kIndexVersion)
        throw FormatError("unsupported index version " + std::to_string(version) + " (expected " +
                          std::to_string(kIndexVersion) + ")");
    SteinerIndex idx;
    auto raw_hash = in.take(32, "graph hash");
    std::memcpy(idx.hash.data(), raw_hash.data(), 32);
    GraphHash actual = graph_hash(g);
    if (actual != idx.hash)
        throw FormatError("graph hash mismatch: index was built for " + to_hex(idx.hash) + ", supplied graph is " +
                          to_hex(actual));
    idx.l = in.u32("l");
    if (idx.l < 2) throw FormatError("index l must be at least 2");
    std::uint32_t width = in.u32("width");
    std::uint32_t height = in.u32("height");
    std::uint32_t nodes = in.count(8, "node count");

    std::vector<std::vector<VertexId>> bags(nodes);
    std::vector<NodeId> parent(nodes);
    std::vector<NodeKind> kinds(nodes);
    std::vector<VertexId> kind_vertex(nodes);
    idx.tables.resize(nodes);
    for (NodeId i = 0; i < nodes; ++i) {
        std::uint64_t length = in.u64("record length");
        if (length > in.remaining()) throw FormatError("index truncated: node record " + std::to_string(i) + " is cut off");
        detail::ByteReader rec(in.take(static_cast<std::size_t>(length), "node record"));
        parent[i] = rec.u32("parent");
        std::uint8_t kind = rec.u8("node kind");
        if (kind > static_cast<std::uint8_t>(NodeKind::Join)) throw FormatError("bad node kind in record " + std::to_string(i));
        kinds[i] = static_cast<NodeKind>(kind);
        kind_vertex[i] = rec.u32("kind vertex");
        std::uint32_t bag_size = rec.count(4, "bag size");
        for (std::uint32_t j = 0; j < bag_size; ++j) {
            VertexId v = rec.u32("bag vertex");
            if (!g.contains(v)) throw FormatError("bag vertex outside the graph in record " + std::to_string(i));
            bags[i].push_back(v);
        }
        BagTable& table = idx.tables[i];
        table.node = i;
        std::uint32_t entries = rec.count(16, "entry count");
        for (std::uint32_t j = 0; j < entries; ++j) {
            std::uint32_t key_size = rec.count(4, "key size");
            std::vector<VertexId> key;
            for (std::uint32_t k = 0; k < key_size; ++k) {
                VertexId v = rec.u32("key vertex");
                if (std::find(bags[i].begin(), bags[i].end(), v) == bags[i].end())
                    throw FormatError("key vertex outside its bag in record " + std::to_string(i));
                key.push_back(v);
            }
            Weight w(rec.u64("weight"));
            std::uint32_t edges = rec.count(16, "edge count");
            TreeEntry entry;
            entry.weight = w;
            if (w.is_finite()) {
                SteinerTree tree;
                tree.terminals = key;
                tree.weight = w;
                for (std::uint32_t k = 0; k < edges; ++k) {
                    VertexId a = rec.u32("edge");
                    VertexId b = rec.u32("edge");
                    tree.edges.push_back(Edge{a, b, Weight(rec.u64("edge weight"))});
                }
                if (auto defect = tree_defect(tree, &g))
                    throw FormatError("corrupt tree in record " + std::to_string(i) + ": " + *defect);
                entry.tree = std::make_shared<const SteinerTree>(std::move(tree));
            } else if (edges != 0) {
                throw FormatError("infeasible entry with edges in record " + std::to_string(i));
            }
            TerminalKey tk;
            try {
                tk = TerminalKey(std::move(key));
            } catch (const InputError& e) {
                throw FormatError(std::string("bad key in record ") + std::to_string(i) + ": " + e.what());
            }
            if (!table.entries.emplace(std::move(tk), std::move(entry)).second)
                throw FormatError("duplicate key in record " + std::to_string(i));
        }
        if (rec.remaining() != 0) throw FormatError("trailing bytes in node record " + std::to_string(i));
    }
    if (in.remaining() != 0) throw FormatError("trailing bytes after the last node record");

    try {
        idx.ntd = NiceTreeDecomposition(TreeDecomposition(std::move(bags), std::move(parent)), std::move(kinds),
                                        std::move(kind_vertex));
        idx.roots = induced_roots(idx.ntd, g.vertex_count());
    } catch (const InputError& e) {
        throw FormatError(std::string("index decomposition is malformed: ") + e.what());
    }
    if (!validate_nice(idx.ntd).empty()) throw FormatError("index decomposition violates nice structure");
    idx.meta.width = idx.ntd.width();
    idx.meta.height = idx.ntd.height();
    idx.meta.node_count = idx.ntd.size();
    for (const auto& t : idx.tables) idx.meta.entry_count += t.entries.size();
    if (static_cast<std::uint32_t>(idx.meta.width) != width || idx.meta.height != height)
        throw FormatError("index header width/height disagree with the stored decomposition");
    return idx;
}

/// Debug view of the same content. Vertices are printed 1-based.
inline nlohmann::json index_to_json(const SteinerIndex& idx) {
    using nlohmann::json;
    json nodes = json::array();
    for (NodeId i = 0; i < idx.ntd.size(); ++i) {
        json bag = json::array();
        for (VertexId v : idx.ntd.bag(i)) bag.push_back(v + 1);
        json entries = json::array();
        for (const auto& [key, entry] : idx.tables[i].entries) {
            json k = json::array();
            for (VertexId v : key.vertices()) k.push_back(v + 1);
            json edges = json::array();
            if (entry.feasible())
                for (const Edge& e : entry.tree->edges) edges.push_back({e.u + 1, e.v + 1, e.w.value()});
            entries.push_back({{"key", k},
                               {"weight", entry.feasible() ? json(entry.weight.value()) : json("inf")},
                               {"edges", edges}});
        }
        NodeId p = idx.ntd.parent(i);
        VertexId kv = idx.ntd.kind_vertex(i);
        nodes.push_back({{"id", i},
                         {"parent", p == kNoNode ? json(nullptr) : json(p)},
                         {"kind", to_string(idx.ntd.kind(i))},
                         {"vertex", kv == kNoVertex ? json(nullptr) : json(kv + 1)},
                         {"bag", bag},
                         {"entries", entries}});
    }
    return {{"format", "STDX"},
            {"version", kIndexVersion},
            {"graph_hash", to_hex(idx.hash)},
            {"l", idx.l},
            {"width", idx.meta.width},
            {"height", idx.meta.height},
            {"node_count", idx.meta.node_count},
            {"entry_count", idx.meta.entry_count},
            {"nodes", nodes}};
}

}  // namespace steiner
