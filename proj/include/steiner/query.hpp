#pragma once

// Online query answering over a SteinerIndex.
//
// stvs() recombines two families of sub-optima through a vertex separator:
//
//   ST(S + v + v0) = min over w in C and disjoint S = S' + S'' of
//                    ST(S' + w + v)  union  ST(S'' + w + v0)
//
// query() walks the nice decomposition bottom-up from the terminals' induced
// roots to their LCA, keeping a WorkingSet of optima over
// (current bag + terminals already forgotten below) and extending it at
// introduce and join nodes with stvs(), using the child bag (introduce) or
// the join bag as the separator.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "steiner/bag_index.hpp"

namespace steiner {

/// Vertex set as bits over some sorted universe (at most 64 vertices).
using KeyMask = std::uint64_t;

inline constexpr unsigned kMaxUniverse = 64;

inline constexpr KeyMask bit(unsigned pos) { return KeyMask{1} << pos; }

/// The winning split of one stvs evaluation, in universe positions.
struct StvsChoice {
    Weight weight = Weight::infinity();
    unsigned via = kMaxUniverse;  // separator vertex w
    KeyMask side_v = 0;           // S' + w + v
    KeyMask side_v0 = 0;          // S'' + w + v0
    std::size_t candidates = 0;
};

/// Evaluates the recombination over bit positions. `weight_of(mask)` is only
/// called for masks of two or more vertices; smaller keys weigh zero. Ties
/// keep the first candidate in (w ascending, S' descending) order.
template <class WeightOf>
StvsChoice stvs_select(unsigned v, unsigned v0, KeyMask s, KeyMask separator, WeightOf&& weight_of) {
    StvsChoice best;
    const KeyMask ends = bit(v) | bit(v0);
    s &= ~ends;
    auto weigh = [&](KeyMask key) { return std::popcount(key) <= 1 ? Weight::zero() : weight_of(key); };
    for (KeyMask rest = separator; rest != 0; rest &= rest - 1) {
        const unsigned w = static_cast<unsigned>(std::countr_zero(rest));
        for (KeyMask part = s;; part = (part - 1) & s) {
            const KeyMask side_v = part | bit(w) | bit(v);
            const KeyMask side_v0 = (s ^ part) | bit(w) | bit(v0);
            ++best.candidates;
            Weight a = weigh(side_v);
            if (a.is_finite()) {
                Weight total = a + weigh(side_v0);
                if (total < best.weight) {
                    best.weight = total;
                    best.via = w;
                    best.side_v = side_v;
                    best.side_v0 = side_v0;
                }
            }
            if (part == 0) break;
        }
    }
    return best;
}

/// Union of two sub-trees reduced to a tree spanning exactly `terminals`.
inline SteinerTree compose(const SteinerTree& a, const SteinerTree& b, std::vector<VertexId> terminals) {
    Subgraph joined = graph_union(a, b);
    if (!joined.connected) throw InvariantError("stvs composed two sub-trees without a shared vertex");
    joined.terminals = std::move(terminals);
    return prune_to_tree(joined);
}

/// Tree-set accessor for stvs(): returns the stored optimum for a key of two
/// or more vertices, or throws InvariantError when the key is not stored.
using TreeLookup = std::function<TreeEntry(const TerminalKey&)>;

/// Vertex-level recombination. The caller guarantees that `separator`
/// separates v from v0 and that every needed sub-tree is resolvable.
inline TreeEntry stvs(VertexId v, VertexId v0, std::span<const VertexId> s, std::span<const VertexId> separator,
                      const TreeLookup& lookup, StvsChoice* choice_out = nullptr) {
    std::vector<VertexId> universe(s.begin(), s.end());
    universe.insert(universe.end(), separator.begin(), separator.end());
    universe.push_back(v);
    universe.push_back(v0);
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
    if (universe.size() > kMaxUniverse) throw CapacityError("stvs universe exceeds 64 vertices");
    auto pos = [&](VertexId x) {
        return static_cast<unsigned>(std::lower_bound(universe.begin(), universe.end(), x) - universe.begin());
    };
    auto members = [&](KeyMask m) {
        std::vector<VertexId> out;
        for (; m != 0; m &= m - 1) out.push_back(universe[static_cast<std::size_t>(std::countr_zero(m))]);
        return out;
    };
    KeyMask s_mask = 0, c_mask = 0;
    for (VertexId x : s) s_mask |= bit(pos(x));
    for (VertexId x : separator) c_mask |= bit(pos(x));

    std::unordered_map<KeyMask, TreeEntry> seen;
    auto fetch = [&](KeyMask m) -> const TreeEntry& {
        auto it = seen.find(m);
        if (it == seen.end()) it = seen.emplace(m, lookup(TerminalKey(members(m)))).first;
        return it->second;
    };
    StvsChoice choice = stvs_select(pos(v), pos(v0), s_mask, c_mask, [&](KeyMask m) { return fetch(m).weight; });
    if (choice_out) *choice_out = choice;

    std::vector<VertexId> target(s.begin(), s.end());
    target.push_back(v);
    target.push_back(v0);
    std::sort(target.begin(), target.end());
    target.erase(std::unique(target.begin(), target.end()), target.end());
    if (choice.weight.is_infinite()) return TreeEntry{};
    if (target.size() <= 1) return TreeEntry::of(empty_tree(target));
    auto tree_of = [&](KeyMask m) {
        return std::popcount(m) <= 1 ? empty_tree(members(m)) : *fetch(m).tree;
    };
    return TreeEntry::of(compose(tree_of(choice.side_v), tree_of(choice.side_v0), std::move(target)));
}

/// Optima over the ground set (bag + accumulated terminals) of one traversal
/// position, for every key of 2..cap vertices.
class WorkingSet {
public:
    NodeId node = kNoNode;
    std::size_t cap = 0;
    std::vector<VertexId> ground;           // sorted
    KeyMask bag_mask = 0;                   // positions of current bag vertices
    KeyMask accumulated_mask = 0;           // positions of forgotten terminals
    std::vector<VertexId> insertion_order;  // forgotten terminals, oldest first
    std::unordered_map<KeyMask, TreeEntry> entries;

    std::optional<unsigned> position(VertexId v) const {
        auto it = std::lower_bound(ground.begin(), ground.end(), v);
        if (it == ground.end() || *it != v) return std::nullopt;
        return static_cast<unsigned>(it - ground.begin());
    }

    std::optional<KeyMask> mask_of(std::span<const VertexId> vertices) const {
        KeyMask m = 0;
        for (VertexId v : vertices) {
            auto p = position(v);
            if (!p) return std::nullopt;
            m |= bit(*p);
        }
        return m;
    }

    std::vector<VertexId> members(KeyMask m) const {
        std::vector<VertexId> out;
        for (; m != 0; m &= m - 1) out.push_back(ground[static_cast<std::size_t>(std::countr_zero(m))]);
        return out;
    }

    std::vector<VertexId> bag() const { return members(bag_mask); }
    std::vector<VertexId> accumulated() const { return members(accumulated_mask); }

    const TreeEntry* find(std::span<const VertexId> key) const {
        auto m = mask_of(key);
        if (!m) return nullptr;
        auto it = entries.find(*m);
        return it == entries.end() ? nullptr : &it->second;
    }

    /// All entries keyed by vertex tuples, for inspection.
    std::map<TerminalKey, TreeEntry> snapshot() const {
        std::map<TerminalKey, TreeEntry> out;
        for (const auto& [m, e] : entries) out.emplace(TerminalKey(members(m)), e);
        return out;
    }

    /// Moves to a new sorted ground set. Keys touching a dropped vertex are discarded.
    void rebase(std::vector<VertexId> new_ground) {
        if (new_ground.size() > kMaxUniverse) throw CapacityError("working set ground exceeds 64 vertices");
        std::vector<int> to(ground.size(), -1);
        for (std::size_t i = 0; i < ground.size(); ++i) {
            auto it = std::lower_bound(new_ground.begin(), new_ground.end(), ground[i]);
            if (it != new_ground.end() && *it == ground[i]) to[i] = static_cast<int>(it - new_ground.begin());
        }
        auto translate = [&](KeyMask m) -> std::optional<KeyMask> {
            KeyMask out = 0;
            for (; m != 0; m &= m - 1) {
                int p = to[static_cast<std::size_t>(std::countr_zero(m))];
                if (p < 0) return std::nullopt;
                out |= bit(static_cast<unsigned>(p));
            }
            return out;
        };
        std::unordered_map<KeyMask, TreeEntry> moved;
        moved.reserve(entries.size());
        for (auto& [m, e] : entries)
            if (auto t = translate(m)) moved.emplace(*t, std::move(e));
        auto keep_bits = [&](KeyMask m) {
            KeyMask out = 0;
            for (; m != 0; m &= m - 1) {
                int p = to[static_cast<std::size_t>(std::countr_zero(m))];
                if (p >= 0) out |= bit(static_cast<unsigned>(p));
            }
            return out;
        };
        bag_mask = keep_bits(bag_mask);
        accumulated_mask = keep_bits(accumulated_mask);
        entries = std::move(moved);
        ground = std::move(new_ground);
    }
};

struct QueryStats {
    std::size_t nodes_visited = 0;
    std::size_t stvs_calls = 0;
    std::size_t candidates = 0;
    double wall_ms = 0.0;
    std::uint32_t height = 0;
    int width = -1;
};

struct QueryOptions {
    /// Run is_separator() on every stvs call site (small instances only).
    bool check_separators = false;
    /// Called with each finished WorkingSet, bottom-up.
    std::function<void(const WorkingSet&)> observer;
};

/// Shared state of one query's traversal.
struct QueryContext {
    const Graph& graph;
    const SteinerIndex& index;
    std::vector<VertexId> terminals;  // sorted
    std::size_t cap;
    QueryOptions options;
    QueryStats stats;

    bool is_terminal(VertexId v) const { return std::binary_search(terminals.begin(), terminals.end(), v); }
};

namespace detail {

// Calls fn(mask) for every subset of `universe` with size in [lo, hi],
// smallest sizes first.
template <class Fn>
void for_each_subset(KeyMask universe, std::size_t lo, std::size_t hi, Fn&& fn) {
    std::vector<unsigned> bits;
    for (KeyMask m = universe; m != 0; m &= m - 1) bits.push_back(static_cast<unsigned>(std::countr_zero(m)));
    hi = std::min(hi, bits.size());
    for (std::size_t size = lo; size <= hi; ++size) {
        std::vector<std::size_t> idx(size);
        for (std::size_t i = 0; i < size; ++i) idx[i] = i;
        while (true) {
            KeyMask m = 0;
            for (std::size_t i : idx) m |= bit(bits[i]);
            fn(m);
            std::size_t i = size;
            while (i > 0 && idx[i - 1] == bits.size() - size + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
}

// Orders new keys so that every key comes after all keys with fewer
// accumulated terminals.
inline void order_by_terminal_count(std::vector<KeyMask>& keys, KeyMask accumulated) {
    std::sort(keys.begin(), keys.end(), [&](KeyMask a, KeyMask b) {
        int ta = std::popcount(a & accumulated), tb = std::popcount(b & accumulated);
        return ta != tb ? ta < tb : a < b;
    });
}

// Latest-inserted terminal of `order` contained in key (or earliest, if !latest).
inline unsigned pick_terminal(const WorkingSet& ws, const std::vector<VertexId>& order, KeyMask key, bool latest) {
    auto probe = [&](VertexId t) -> std::optional<unsigned> {
        auto p = ws.position(t);
        if (p && (key & bit(*p))) return p;
        return std::nullopt;
    };
    if (latest) {
        for (auto it = order.rbegin(); it != order.rend(); ++it)
            if (auto p = probe(*it)) return *p;
    } else {
        for (VertexId t : order)
            if (auto p = probe(t)) return *p;
    }
    throw InvariantError("key has no accumulated terminal from the expected side");
}

inline const TreeEntry& require(const WorkingSet& ws, KeyMask key) {
    auto it = ws.entries.find(key);
    if (it == ws.entries.end()) {
        std::string list;
        for (VertexId v : ws.members(key)) list += " " + std::to_string(v);
        throw InvariantError("working set at node " + std::to_string(ws.node) + " lacks sub-tree for key{" + list + " }");
    }
    return it->second;
}

// One stvs evaluation inside a working set; stores the result under `key`.
inline void recombine(QueryContext& ctx, WorkingSet& ws, KeyMask key, unsigned v, unsigned v0, KeyMask separator) {
    if (ctx.options.check_separators) {
        auto sep = ws.members(separator);
        if (!is_separator(ctx.graph, sep, ws.ground[v], ws.ground[v0]))
            throw InvariantError("stvs separator does not separate " + std::to_string(ws.ground[v]) + " from " +
                                 std::to_string(ws.ground[v0]));
    }
    StvsChoice choice = stvs_select(v, v0, key & ~(bit(v) | bit(v0)), separator,
                                    [&](KeyMask m) { return require(ws, m).weight; });
    ++ctx.stats.stvs_calls;
    ctx.stats.candidates += choice.candidates;
    if (choice.weight.is_infinite()) {
        ws.entries[key] = TreeEntry{};
        return;
    }
    auto tree_of = [&](KeyMask m) {
        return std::popcount(m) <= 1 ? empty_tree(ws.members(m)) : *require(ws, m).tree;
    };
    ws.entries[key] = TreeEntry::of(compose(tree_of(choice.side_v), tree_of(choice.side_v0), ws.members(key)));
}

}  // namespace detail

/// Starting point at a terminal's induced root: the node's bag table.
inline WorkingSet working_set_from_bag(const QueryContext& ctx, NodeId node) {
    WorkingSet ws;
    ws.node = node;
    ws.cap = ctx.cap;
    auto bag = ctx.index.ntd.bag(node);
    ws.ground.assign(bag.begin(), bag.end());
    if (ws.ground.size() > kMaxUniverse) throw CapacityError("bag exceeds 64 vertices");
    ws.bag_mask = ws.ground.empty() ? 0 : (ws.ground.size() == 64 ? ~KeyMask{0} : bit(static_cast<unsigned>(ws.ground.size())) - 1);
    for (const auto& [key, entry] : ctx.index.tables.at(node).entries)
        if (key.size() <= ctx.cap) ws.entries.emplace(*ws.mask_of(key.vertices()), entry);
    return ws;
}

/// Forget node: a forgotten terminal moves from the bag to the accumulated
/// set with all its entries; a forgotten non-terminal takes its entries with it.
inline WorkingSet handle_forget(WorkingSet ws, VertexId removed, bool is_terminal) {
    auto p = ws.position(removed);
    if (!p || !(ws.bag_mask & bit(*p))) throw InvariantError("forgotten vertex is not in the current bag");
    if (is_terminal) {
        ws.bag_mask &= ~bit(*p);
        ws.accumulated_mask |= bit(*p);
        ws.insertion_order.push_back(removed);
        return ws;
    }
    std::vector<VertexId> ground = ws.ground;
    ground.erase(ground.begin() + *p);
    ws.rebase(std::move(ground));
    return ws;
}

/// Introduce node: adds every key containing `added`. Keys inside the bag
/// are copied from the node's bag table; the rest are built by stvs with the
/// child bag as separator, fewest accumulated terminals first.
inline WorkingSet handle_introduce(QueryContext& ctx, WorkingSet ws, NodeId node, VertexId added) {
    if (ws.position(added)) throw InvariantError("introduced vertex already in the working set");
    const KeyMask child_bag_vertices = ws.bag_mask;
    std::vector<VertexId> child_bag = ws.members(child_bag_vertices);
    std::vector<VertexId> ground = ws.ground;
    ground.insert(std::lower_bound(ground.begin(), ground.end(), added), added);
    ws.rebase(std::move(ground));
    ws.node = node;
    const unsigned v = *ws.position(added);
    ws.bag_mask |= bit(v);
    const KeyMask separator = *ws.mask_of(child_bag);
    const KeyMask others = (ws.bag_mask | ws.accumulated_mask) & ~bit(v);

    std::vector<KeyMask> keys;
    detail::for_each_subset(others, 1, ctx.cap - 1, [&](KeyMask m) { keys.push_back(m | bit(v)); });
    detail::order_by_terminal_count(keys, ws.accumulated_mask);

    const BagTable& table = ctx.index.tables.at(node);
    for (KeyMask key : keys) {
        if ((key & ws.accumulated_mask) == 0) {
            const TreeEntry* e = table.find(TerminalKey(ws.members(key)));
            if (!e) throw InvariantError("bag table of node " + std::to_string(node) + " lacks a required key");
            ws.entries[key] = *e;
            continue;
        }
        unsigned t = detail::pick_terminal(ws, ws.insertion_order, key, true);
        detail::recombine(ctx, ws, key, t, v, separator);
    }
    return ws;
}

/// Join node: unions both children's entries, then inserts the right side's
/// terminals into the left side's keys via stvs with the join bag as separator.
inline WorkingSet handle_join(QueryContext& ctx, WorkingSet left, WorkingSet right, NodeId node) {
    std::vector<VertexId> bag = left.bag();
    if (bag != right.bag()) throw InvariantError("join children have different bags");
    std::vector<VertexId> left_terms = left.accumulated(), right_terms = right.accumulated();
    std::vector<VertexId> common;
    std::set_intersection(left_terms.begin(), left_terms.end(), right_terms.begin(), right_terms.end(),
                          std::back_inserter(common));
    if (!common.empty()) throw InvariantError("join children share accumulated terminals");

    std::vector<VertexId> ground = bag;
    ground.insert(ground.end(), left_terms.begin(), left_terms.end());
    ground.insert(ground.end(), right_terms.begin(), right_terms.end());
    std::sort(ground.begin(), ground.end());
    left.rebase(ground);
    right.rebase(ground);

    WorkingSet ws = std::move(left);
    ws.node = node;
    for (auto& [m, e] : right.entries) ws.entries.try_emplace(m, std::move(e));
    const KeyMask left_acc = ws.accumulated_mask;
    const KeyMask right_acc = right.accumulated_mask;
    const std::vector<VertexId> left_order = ws.insertion_order;
    ws.accumulated_mask |= right_acc;
    ws.insertion_order.insert(ws.insertion_order.end(), right.insertion_order.begin(), right.insertion_order.end());

    std::vector<KeyMask> keys;
    detail::for_each_subset(ws.bag_mask | ws.accumulated_mask, 2, ctx.cap, [&](KeyMask m) {
        if ((m & left_acc) && (m & right_acc)) keys.push_back(m);
    });
    detail::order_by_terminal_count(keys, ws.accumulated_mask);
    for (KeyMask key : keys) {
        unsigned t_right = detail::pick_terminal(ws, right.insertion_order, key, true);
        unsigned t_left = detail::pick_terminal(ws, left_order, key, false);
        detail::recombine(ctx, ws, key, t_right, t_left, ws.bag_mask);
    }
    return ws;
}

struct QueryResult {
    SteinerTree tree;
    QueryStats stats;
    NodeId lca = kNoNode;
    std::vector<NodeId> visited;  // bottom-up processing order
};

/// Exact Steiner tree for `terminals` from the index. Visits only the nodes
/// between the terminals' induced roots and their lowest common ancestor.
inline QueryResult query(const SteinerIndex& idx, const Graph& g, std::span<const VertexId> terminals,
                         const QueryOptions& options = {}) {
    auto started = std::chrono::steady_clock::now();
    if (idx.hash != graph_hash(g)) throw InputError("index was built for a different graph");
    std::vector<VertexId> terms(terminals.begin(), terminals.end());
    for (VertexId t : terms)
        if (!g.contains(t)) throw InputError("terminal " + std::to_string(t) + " is not a vertex of the graph");
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());

    QueryResult result;
    result.stats.height = idx.meta.height;
    result.stats.width = idx.meta.width;
    auto finish = [&] {
        result.stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        return result;
    };
    if (terms.size() <= 1) {
        result.tree = empty_tree(terms);
        return finish();
    }
    if (terms.size() > idx.l)
        throw CapacityError("query has " + std::to_string(terms.size()) + " terminals but the index supports at most " +
                            std::to_string(idx.l) + "; rebuild the index with --l " + std::to_string(terms.size()) +
                            " or use --fallback dw");

    QueryContext ctx{g, idx, terms, terms.size(), options, {}};
    const auto& ntd = idx.ntd;
    std::vector<NodeId> starts;
    for (VertexId t : terms) starts.push_back(idx.roots.at(t));
    const NodeId top = lca(ntd, starts);
    result.lca = top;

    std::vector<NodeId> visited;
    std::unordered_map<NodeId, char> on_path;
    for (NodeId s : starts) {
        for (NodeId x = s;; x = ntd.parent(x)) {
            if (!on_path.emplace(x, 1).second) break;
            visited.push_back(x);
            if (x == top) break;
        }
    }
    std::sort(visited.begin(), visited.end(), [&](NodeId a, NodeId b) {
        return ntd.depth(a) != ntd.depth(b) ? ntd.depth(a) > ntd.depth(b) : a < b;
    });

    std::unordered_map<NodeId, WorkingSet> pending;
    auto take = [&](NodeId c) {
        auto it = pending.find(c);
        WorkingSet ws = std::move(it->second);
        pending.erase(it);
        return ws;
    };
    for (NodeId x : visited) {
        std::vector<NodeId> kids;
        for (NodeId c : ntd.children(x))
            if (on_path.count(c)) kids.push_back(c);
        WorkingSet ws;
        if (kids.empty()) {
            ws = working_set_from_bag(ctx, x);
        } else {
            switch (ntd.kind(x)) {
                case NodeKind::Introduce: ws = handle_introduce(ctx, take(kids[0]), x, ntd.kind_vertex(x)); break;
                case NodeKind::Forget: {
                    VertexId v = ntd.kind_vertex(x);
                    ws = handle_forget(take(kids[0]), v, ctx.is_terminal(v));
                    ws.node = x;
                    break;
                }
                case NodeKind::Join:
                    if (kids.size() == 2) {
                        ws = handle_join(ctx, take(kids[0]), take(kids[1]), x);
                    } else {
                        ws = take(kids[0]);
                        ws.node = x;
                    }
                    break;
                case NodeKind::Leaf: throw InvariantError("leaf node with children");
            }
        }
        ++ctx.stats.nodes_visited;
        if (ctx.options.observer) ctx.options.observer(ws);
        pending.emplace(x, std::move(ws));
    }

    const WorkingSet& final_ws = pending.at(top);
    const TreeEntry* answer = final_ws.find(terms);
    if (!answer) throw InvariantError("final working set lacks the query key");
    if (!answer->feasible()) throw InfeasibleError("terminals lie in different components");
    result.tree = *answer->tree;
    result.stats.nodes_visited = ctx.stats.nodes_visited;
    result.stats.stvs_calls = ctx.stats.stvs_calls;
    result.stats.candidates = ctx.stats.candidates;
    result.visited = std::move(visited);
    return finish();
}

}  // namespace steiner
