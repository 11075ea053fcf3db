#pragma once

// Exact reference solvers: Dreyfus-Wagner dynamic programming over terminal
// subsets, and brute-force enumeration of Steiner vertex sets.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "steiner/graph.hpp"

namespace steiner {

inline constexpr std::size_t kDefaultTerminalCap = 16;
inline constexpr std::size_t kBruteForceVertexCap = 16;

using SubsetMask = std::uint32_t;

/// Dreyfus-Wagner table. cost(D, v) is the weight of a minimum tree spanning
/// the terminals in D plus vertex v. Rows exist for every subset of size
/// 1..max_subset(); each cell keeps a backtrack record so trees can be
/// rebuilt without recomputation.
class DWTable {
public:
    const std::vector<VertexId>& terminals() const { return terminals_; }
    std::size_t max_subset() const { return max_subset_; }
    std::size_t vertex_count() const { return n_; }

    bool has_row(SubsetMask mask) const { return mask < row_of_.size() && row_of_[mask] >= 0; }

    Weight cost(SubsetMask mask, VertexId v) const {
        if (!has_row(mask)) throw InputError("DW table has no row for subset " + std::to_string(mask));
        return cost_[row(mask) + v];
    }

    /// Optimum for the terminal subset itself (needs |mask| <= max_subset + 1).
    Weight optimum(SubsetMask mask) const {
        if (std::popcount(mask) <= 1) return Weight::zero();
        auto [rest, t] = split_top(mask);
        return cost(rest, terminals_[t]);
    }

    SteinerTree tree(SubsetMask mask) const {
        if (std::popcount(mask) <= 1) return empty_tree(members(mask));
        auto [rest, t] = split_top(mask);
        return tree_at(rest, terminals_[t]);
    }

    /// Tree realizing cost(mask, v). Throws InfeasibleError when the cost is infinite.
    SteinerTree tree_at(SubsetMask mask, VertexId v) const {
        if (cost(mask, v).is_infinite()) throw InfeasibleError("terminal subset is not connected");
        std::vector<Edge> edges;
        std::vector<std::pair<SubsetMask, VertexId>> stack{{mask, v}};
        while (!stack.empty()) {
            auto [m, x] = stack.back();
            stack.pop_back();
            const Back& b = back_[row(m) + x];
            switch (b.kind) {
                case Back::Base: break;
                case Back::Attach:
                    edges.push_back(make_edge(b.data, x, weight_of(b.data, x)));
                    stack.push_back({m, b.data});
                    break;
                case Back::Merge:
                    stack.push_back({b.data, x});
                    stack.push_back({m ^ b.data, x});
                    break;
                case Back::None: throw InvariantError("DW backtrack reached an unset cell");
            }
        }
        std::sort(edges.begin(), edges.end(), edge_endpoints_less);
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        std::vector<VertexId> terms = members(mask);
        terms.push_back(v);
        return prune_to_tree(Subgraph{std::move(terms), std::move(edges), Weight::zero(), true});
    }

    std::vector<VertexId> members(SubsetMask mask) const {
        std::vector<VertexId> out;
        for (std::size_t i = 0; i < terminals_.size(); ++i)
            if (mask >> i & 1U) out.push_back(terminals_[i]);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    friend DWTable dreyfus_wagner_table(const Graph&, std::span<const VertexId>, std::size_t);

    struct Back {
        enum Kind : std::uint8_t { None, Base, Attach, Merge };
        Kind kind = None;
        std::uint32_t data = 0;  // predecessor vertex (Attach) or submask (Merge)
    };

    std::size_t row(SubsetMask mask) const { return static_cast<std::size_t>(row_of_[mask]) * n_; }

    std::pair<SubsetMask, std::size_t> split_top(SubsetMask mask) const {
        std::size_t t = static_cast<std::size_t>(std::bit_width(mask)) - 1;
        return {mask ^ (SubsetMask{1} << t), t};
    }

    Weight weight_of(VertexId a, VertexId b) const {
        auto it = std::lower_bound(edge_keys_.begin(), edge_keys_.end(), std::pair(std::min(a, b), std::max(a, b)));
        return edge_weights_[static_cast<std::size_t>(it - edge_keys_.begin())];
    }

    std::vector<VertexId> terminals_;
    std::size_t max_subset_ = 0;
    std::size_t n_ = 0;
    std::vector<std::int32_t> row_of_;
    std::vector<Weight> cost_;
    std::vector<Back> back_;
    std::vector<std::pair<VertexId, VertexId>> edge_keys_;
    std::vector<Weight> edge_weights_;
};

/// Fills a DW table for subsets of size up to `max_subset` over the given
/// (distinct) terminals. Unreachable cells stay at +infinity.
inline DWTable dreyfus_wagner_table(const Graph& g, std::span<const VertexId> terminals, std::size_t max_subset) {
    const std::size_t k = terminals.size();
    if (k > 31) throw CapacityError("too many terminals for a DW table");
    for (VertexId t : terminals)
        if (!g.contains(t)) throw InputError("terminal out of range");
    {
        std::vector<VertexId> sorted(terminals.begin(), terminals.end());
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw InputError("duplicate terminal");
    }
    DWTable table;
    table.terminals_.assign(terminals.begin(), terminals.end());
    table.max_subset_ = std::min(max_subset, k);
    table.n_ = g.vertex_count();
    for (const Edge& e : g.edges()) {
        table.edge_keys_.emplace_back(e.u, e.v);
        table.edge_weights_.push_back(e.w);
    }
    const std::size_t n = table.n_;
    const SubsetMask full = k == 0 ? 0 : static_cast<SubsetMask>((std::uint64_t{1} << k) - 1);

    std::vector<SubsetMask> masks;
    for (SubsetMask m = 1; m <= full && m != 0; ++m)
        if (static_cast<std::size_t>(std::popcount(m)) <= table.max_subset_) masks.push_back(m);
    std::stable_sort(masks.begin(), masks.end(), [](SubsetMask a, SubsetMask b) { return std::popcount(a) < std::popcount(b); });

    table.row_of_.assign(static_cast<std::size_t>(full) + 1, -1);
    for (std::size_t i = 0; i < masks.size(); ++i) table.row_of_[masks[i]] = static_cast<std::int32_t>(i);
    table.cost_.assign(masks.size() * n, Weight::infinity());
    table.back_.assign(masks.size() * n, {});

    using Item = std::pair<Weight, VertexId>;
    for (SubsetMask mask : masks) {
        Weight* cost = &table.cost_[table.row(mask)];
        DWTable::Back* back = &table.back_[table.row(mask)];
        if (std::popcount(mask) == 1) {
            VertexId t = terminals[static_cast<std::size_t>(std::countr_zero(mask))];
            ShortestPathTree spt = dijkstra(g, t);
            for (VertexId v = 0; v < n; ++v) {
                cost[v] = spt.dist[v];
                if (v == t) back[v] = {DWTable::Back::Base, 0};
                else if (spt.pred[v] != kNoVertex) back[v] = {DWTable::Back::Attach, spt.pred[v]};
            }
            continue;
        }
        // Merge two complementary subtrees at the same vertex. The lowest
        // terminal is pinned to the first part so each split is seen once.
        const SubsetMask low = mask & (~mask + 1);
        for (VertexId v = 0; v < n; ++v) {
            for (SubsetMask part = (mask - 1) & mask; part != 0; part = (part - 1) & mask) {
                if (!(part & low)) continue;
                Weight c = table.cost_[table.row(part) + v] + table.cost_[table.row(mask ^ part) + v];
                if (c < cost[v]) {
                    cost[v] = c;
                    back[v] = {DWTable::Back::Merge, part};
                }
            }
        }
        // Grow by attaching paths (Dijkstra seeded with the merge costs).
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        std::vector<char> settled(n, 0);
        for (VertexId v = 0; v < n; ++v)
            if (cost[v].is_finite()) heap.emplace(cost[v], v);
        while (!heap.empty()) {
            auto [d, u] = heap.top();
            heap.pop();
            if (settled[u] || d != cost[u]) continue;
            settled[u] = 1;
            for (const Arc& a : g.neighbors(u)) {
                if (settled[a.to]) continue;
                Weight nd = d + a.w;
                if (nd < cost[a.to]) {
                    cost[a.to] = nd;
                    back[a.to] = {DWTable::Back::Attach, u};
                    heap.emplace(nd, a.to);
                } else if (nd == cost[a.to] && back[a.to].kind == DWTable::Back::Attach && u < back[a.to].data) {
                    back[a.to].data = u;
                }
            }
        }
    }
    return table;
}

struct DWResult {
    SteinerTree tree;
    DWTable table;
};

/// Minimum Steiner tree by Dreyfus-Wagner. The returned table covers every
/// proper terminal subset, so sub-optima are readable without recomputation.
inline DWResult dreyfus_wagner(const Graph& g, std::span<const VertexId> terminals, std::size_t cap = kDefaultTerminalCap) {
    std::vector<VertexId> terms(terminals.begin(), terminals.end());
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    if (terms.size() > cap)
        throw CapacityError("Dreyfus-Wagner refuses " + std::to_string(terms.size()) + " terminals (cap " +
                            std::to_string(cap) + ")");
    if (terms.empty()) return {empty_tree({}), dreyfus_wagner_table(g, terms, 0)};
    DWTable table = dreyfus_wagner_table(g, terms, terms.size() == 1 ? 1 : terms.size() - 1);
    const SubsetMask full = static_cast<SubsetMask>((std::uint64_t{1} << terms.size()) - 1);
    if (table.optimum(full).is_infinite()) throw InfeasibleError("terminals span more than one component");
    SteinerTree tree = table.tree(full);
    return {std::move(tree), std::move(table)};
}

/// Exact optimum by enumerating every set of Steiner vertices: minimum
/// spanning tree of each connected induced subgraph containing the
/// terminals, stripped of non-terminal leaves. Ties go to the
/// lexicographically smallest edge list.
inline SteinerTree brute_force_steiner(const Graph& g, std::span<const VertexId> terminals) {
    const std::size_t n = g.vertex_count();
    if (n > kBruteForceVertexCap)
        throw CapacityError("brute force refuses graphs above " + std::to_string(kBruteForceVertexCap) + " vertices");
    std::vector<VertexId> terms(terminals.begin(), terminals.end());
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    for (VertexId t : terms)
        if (!g.contains(t)) throw InputError("terminal out of range");
    if (terms.size() <= 1) return empty_tree(terms);

    std::uint32_t terminal_mask = 0;
    for (VertexId t : terms) terminal_mask |= 1U << t;
    std::vector<VertexId> others;
    for (VertexId v = 0; v < n; ++v)
        if (!(terminal_mask >> v & 1U)) others.push_back(v);

    std::vector<Edge> by_weight(g.edges().begin(), g.edges().end());
    std::sort(by_weight.begin(), by_weight.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.w, a.u, a.v) < std::tie(b.w, b.u, b.v); });

    std::optional<SteinerTree> best;
    for (std::uint32_t pick = 0; pick < (1U << others.size()); ++pick) {
        std::uint32_t set = terminal_mask;
        for (std::size_t i = 0; i < others.size(); ++i)
            if (pick >> i & 1U) set |= 1U << others[i];
        UnionFind uf(n);
        std::vector<Edge> mst;
        Weight w = Weight::zero();
        for (const Edge& e : by_weight) {
            if (!(set >> e.u & 1U) || !(set >> e.v & 1U)) continue;
            if (uf.unite(e.u, e.v)) {
                mst.push_back(e);
                w += e.w;
            }
        }
        if (mst.size() + 1 != static_cast<std::size_t>(std::popcount(set))) continue;
        SteinerTree candidate = prune_to_tree(Subgraph{terms, std::move(mst), w, true});
        if (!best || candidate.weight < best->weight ||
            (candidate.weight == best->weight && edges_lex_less(candidate.edges, best->edges)))
            best = std::move(candidate);
    }
    if (!best) throw InfeasibleError("terminals span more than one component");
    return *best;
}

}  // namespace steiner
