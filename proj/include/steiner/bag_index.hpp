#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <compare>
#include <exception>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <openssl/evp.h>

#include "steiner/nice_decomposition.hpp"
#include "steiner/oracle.hpp"

namespace steiner {

/// Strictly ascending vertex tuple identifying one Steiner tree in a table.
class TerminalKey {
public:
    TerminalKey() = default;

    explicit TerminalKey(std::vector<VertexId> vertices) : vertices_(std::move(vertices)) {
        std::sort(vertices_.begin(), vertices_.end());
        if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
            throw InputError("terminal key with repeated vertex");
    }

    std::span<const VertexId> vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }

    bool contains(VertexId v) const { return std::binary_search(vertices_.begin(), vertices_.end(), v); }

    friend auto operator<=>(const TerminalKey&, const TerminalKey&) = default;
    friend bool operator==(const TerminalKey&, const TerminalKey&) = default;

private:
    std::vector<VertexId> vertices_;
};

/// A stored optimum. Infeasible keys carry +infinity and no tree.
struct TreeEntry {
    Weight weight = Weight::infinity();
    std::shared_ptr<const SteinerTree> tree;

    bool feasible() const { return tree != nullptr; }

    static TreeEntry of(SteinerTree t) {
        Weight w = t.weight;
        return {w, std::make_shared<const SteinerTree>(std::move(t))};
    }

    friend bool operator==(const TreeEntry& a, const TreeEntry& b) {
        if (a.weight != b.weight || a.feasible() != b.feasible()) return false;
        return !a.feasible() || *a.tree == *b.tree;
    }
};

/// Precomputed optima for every 2..l subset of one bag.
struct BagTable {
    NodeId node = kNoNode;
    std::map<TerminalKey, TreeEntry> entries;

    const TreeEntry* find(const TerminalKey& key) const {
        auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    }

    friend bool operator==(const BagTable&, const BagTable&) = default;
};

using GraphHash = std::array<std::uint8_t, 32>;

inline std::string to_hex(const GraphHash& h) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (std::uint8_t b : h) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 15]);
    }
    return out;
}

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i) & 0xFF));
}

inline void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i) & 0xFF));
}

}  // namespace detail

/// SHA-256 over a canonical encoding of vertex count, scale and weighted edges.
inline GraphHash graph_hash(const Graph& g) {
    std::string bytes = "steiner-graph-v1";
    detail::put_u64(bytes, g.vertex_count());
    detail::put_u64(bytes, g.scale());
    detail::put_u64(bytes, g.edge_count());
    for (const Edge& e : g.edges()) {
        detail::put_u32(bytes, e.u);
        detail::put_u32(bytes, e.v);
        detail::put_u64(bytes, e.w.value());
    }
    GraphHash h{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), h.data(), &len, EVP_sha256(), nullptr) != 1 || len != h.size())
        throw Error("SHA-256 digest failed");
    return h;
}

struct IndexMetadata {
    int width = -1;
    std::uint32_t height = 0;
    std::size_t node_count = 0;
    std::size_t entry_count = 0;

    friend bool operator==(const IndexMetadata&, const IndexMetadata&) = default;
};

/// Offline index: rooted nice decomposition plus one bag table per node.
struct SteinerIndex {
    GraphHash hash{};
    NiceTreeDecomposition ntd;
    InducedRootMap roots;
    std::size_t l = 0;
    std::vector<BagTable> tables;  // indexed by NodeId
    IndexMetadata meta;

    friend bool operator==(const SteinerIndex&, const SteinerIndex&) = default;
};

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Sum over nodes of sum_{k=2..l} C(|bag|, k): the table size when every subset is stored.
inline std::uint64_t entry_bound(const NiceTreeDecomposition& ntd, std::size_t l) {
    std::uint64_t total = 0;
    for (NodeId i = 0; i < ntd.size(); ++i)
        for (std::size_t k = 2; k <= l; ++k) total += binomial(ntd.bag(i).size(), k);
    return total;
}

/// One Dreyfus-Wagner run over the bag's vertices yields every subset optimum
/// of size 2..min(l, |bag|). Cross-component subsets are stored as +infinity.
inline BagTable build_bag_table(const Graph& g, std::span<const VertexId> bag, std::size_t l, NodeId node = kNoNode,
                                std::size_t terminal_cap = kDefaultTerminalCap) {
    if (l < 2) throw InputError("index terminal bound l must be at least 2");
    if (bag.size() > terminal_cap)
        throw CapacityError("bag of " + std::to_string(bag.size()) + " vertices exceeds the DW cap of " +
                            std::to_string(terminal_cap) + "; decomposition width too large for l = " + std::to_string(l));
    for (VertexId v : bag)
        if (!g.contains(v)) throw InputError("bag vertex outside the graph");
    BagTable table;
    table.node = node;
    const std::size_t top = std::min(l, bag.size());
    if (top < 2) return table;
    DWTable dw = dreyfus_wagner_table(g, bag, top - 1);
    const SubsetMask full = static_cast<SubsetMask>((std::uint64_t{1} << bag.size()) - 1);
    for (SubsetMask mask = 1; mask <= full && mask != 0; ++mask) {
        auto size = static_cast<std::size_t>(std::popcount(mask));
        if (size < 2 || size > top) continue;
        TerminalKey key(dw.members(mask));
        Weight w = dw.optimum(mask);
        table.entries.emplace(std::move(key), w.is_infinite() ? TreeEntry{} : TreeEntry::of(dw.tree(mask)));
    }
    return table;
}

/// Builds tables for every node. Nodes with identical bags (join children,
/// repeated chain bags) share one DW run; `jobs` > 1 computes distinct bags
/// concurrently. The result does not depend on `jobs`.
inline SteinerIndex build_index(const Graph& g, const NiceTreeDecomposition& ntd, std::size_t l, unsigned jobs = 1,
                                std::size_t terminal_cap = kDefaultTerminalCap) {
    if (l < 2) throw InputError("index terminal bound l must be at least 2");
    SteinerIndex idx;
    idx.hash = graph_hash(g);
    idx.ntd = ntd;
    idx.roots = induced_roots(ntd, g.vertex_count());
    idx.l = l;

    std::map<std::vector<VertexId>, std::size_t> distinct;
    std::vector<std::size_t> slot(ntd.size());
    for (NodeId i = 0; i < ntd.size(); ++i) {
        std::vector<VertexId> bag(ntd.bag(i).begin(), ntd.bag(i).end());
        auto [it, _] = distinct.emplace(std::move(bag), distinct.size());
        slot[i] = it->second;
    }
    std::vector<const std::vector<VertexId>*> bags(distinct.size());
    for (const auto& [bag, s] : distinct) bags[s] = &bag;
    for (const auto* bag : bags)
        if (bag->size() > terminal_cap)
            throw CapacityError("bag of " + std::to_string(bag->size()) + " vertices exceeds the DW cap of " +
                                std::to_string(terminal_cap) + "; decomposition width too large for l = " +
                                std::to_string(l));

    std::vector<BagTable> computed(bags.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(bags.size());
    auto worker = [&] {
        for (std::size_t s; (s = next.fetch_add(1)) < bags.size();) {
            try {
                computed[s] = build_bag_table(g, *bags[s], l, kNoNode, terminal_cap);
            } catch (...) {
                failures[s] = std::current_exception();
            }
        }
    };
    jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(bags.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);

    idx.tables.resize(ntd.size());
    for (NodeId i = 0; i < ntd.size(); ++i) {
        idx.tables[i] = computed[slot[i]];
        idx.tables[i].node = i;
        idx.meta.entry_count += idx.tables[i].entries.size();
    }
    idx.meta.width = ntd.width();
    idx.meta.height = ntd.height();
    idx.meta.node_count = ntd.size();
    return idx;
}

}  // namespace steiner
