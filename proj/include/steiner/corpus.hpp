#pragma once

// Seeded instance generators. Every instance is connected and carries
// positive integer weights; output depends only on the arguments.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "steiner/graph_io.hpp"

namespace steiner {

enum class Family { RandomSparse, Grid, TreePlusChords };

inline const char* to_string(Family f) {
    switch (f) {
        case Family::RandomSparse: return "random-sparse";
        case Family::Grid: return "grid";
        case Family::TreePlusChords: return "tree-plus-chords";
    }
    return "?";
}

inline Family parse_family(const std::string& name) {
    if (name == "random-sparse") return Family::RandomSparse;
    if (name == "grid") return Family::Grid;
    if (name == "tree-plus-chords") return Family::TreePlusChords;
    throw InputError("unknown corpus family '" + name + "'");
}

using Rng = std::mt19937_64;

namespace detail {

inline std::uint64_t draw(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

inline std::vector<VertexId> pick_terminals(Rng& rng, std::size_t n, std::size_t k) {
    std::vector<VertexId> all(n);
    std::iota(all.begin(), all.end(), VertexId{0});
    for (std::size_t i = 0; i < std::min(k, n); ++i) std::swap(all[i], all[i + draw(rng, 0, n - 1 - i)]);
    all.resize(std::min(k, n));
    return all;
}

// Random recursive tree: vertex i attaches to a uniform earlier vertex.
inline std::vector<Edge> random_tree(Rng& rng, std::size_t n, std::uint64_t max_weight) {
    std::vector<Edge> edges;
    for (std::size_t i = 1; i < n; ++i)
        edges.push_back(make_edge(static_cast<VertexId>(draw(rng, 0, i - 1)), static_cast<VertexId>(i),
                                  Weight(draw(rng, 1, max_weight))));
    return edges;
}

inline void add_random_edges(Rng& rng, std::size_t n, std::size_t count, std::uint64_t max_weight, std::vector<Edge>& edges) {
    if (n < 2) return;
    std::set<std::pair<VertexId, VertexId>> present;
    for (const Edge& e : edges) present.emplace(e.u, e.v);
    const std::size_t possible = n * (n - 1) / 2;
    for (std::size_t added = 0; added < count && present.size() < possible;) {
        auto a = static_cast<VertexId>(draw(rng, 0, n - 1));
        auto b = static_cast<VertexId>(draw(rng, 0, n - 1));
        if (a == b) continue;
        Edge e = make_edge(a, b, Weight(draw(rng, 1, max_weight)));
        if (!present.emplace(e.u, e.v).second) continue;
        edges.push_back(e);
        ++added;
    }
}

}  // namespace detail

/// Spanning random tree plus `extra_edges` uniform extra edges.
inline Instance random_sparse(Rng& rng, std::size_t n, std::size_t extra_edges, std::size_t terminals,
                              std::uint64_t max_weight = 10) {
    auto edges = detail::random_tree(rng, n, max_weight);
    detail::add_random_edges(rng, n, extra_edges, max_weight, edges);
    Instance inst;
    inst.graph = Graph(n, edges);
    inst.terminals = detail::pick_terminals(rng, n, terminals);
    return inst;
}

/// rows x cols grid with 4-neighbour edges.
inline Instance grid(Rng& rng, std::size_t rows, std::size_t cols, std::size_t terminals, std::uint64_t max_weight = 10) {
    std::vector<Edge> edges;
    auto id = [&](std::size_t r, std::size_t c) { return static_cast<VertexId>(r * cols + c); };
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.push_back(make_edge(id(r, c), id(r, c + 1), Weight(detail::draw(rng, 1, max_weight))));
            if (r + 1 < rows) edges.push_back(make_edge(id(r, c), id(r + 1, c), Weight(detail::draw(rng, 1, max_weight))));
        }
    Instance inst;
    inst.graph = Graph(rows * cols, edges);
    inst.terminals = detail::pick_terminals(rng, rows * cols, terminals);
    return inst;
}

/// Random tree plus chords between vertices at most `reach` tree-levels apart
/// in insertion order, which keeps the width small.
inline Instance tree_plus_chords(Rng& rng, std::size_t n, std::size_t chords, std::size_t terminals,
                                 std::uint64_t max_weight = 10, std::size_t reach = 4) {
    auto edges = detail::random_tree(rng, n, max_weight);
    std::set<std::pair<VertexId, VertexId>> present;
    for (const Edge& e : edges) present.emplace(e.u, e.v);
    for (std::size_t added = 0, attempts = 0; added < chords && attempts < 50 * (chords + 1); ++attempts) {
        if (n < 3) break;
        auto a = static_cast<VertexId>(detail::draw(rng, 0, n - 1));
        auto offset = detail::draw(rng, 2, reach);
        if (a + offset >= n) continue;
        Edge e = make_edge(a, static_cast<VertexId>(a + offset), Weight(detail::draw(rng, 1, max_weight)));
        if (!present.emplace(e.u, e.v).second) continue;
        edges.push_back(e);
        ++added;
    }
    Instance inst;
    inst.graph = Graph(n, edges);
    inst.terminals = detail::pick_terminals(rng, n, terminals);
    return inst;
}

struct CorpusOptions {
    Family family = Family::RandomSparse;
    std::size_t count = 10;
    std::size_t min_vertices = 6;
    std::size_t max_vertices = 25;
    std::size_t min_terminals = 2;
    std::size_t max_terminals = 5;
    std::uint64_t max_weight = 10;
};

/// `count` instances named `<family>-<seed>-<i>`. Grid sides are drawn so
/// that rows*cols stays within the vertex bounds.
inline std::vector<Instance> gen_corpus(std::uint64_t seed, const CorpusOptions& opt) {
    if (opt.min_vertices < 2 || opt.max_vertices < opt.min_vertices) throw InputError("bad vertex bounds");
    if (opt.min_terminals > opt.max_terminals) throw InputError("bad terminal bounds");
    Rng rng(seed);
    std::vector<Instance> out;
    for (std::size_t i = 0; i < opt.count; ++i) {
        std::size_t n = detail::draw(rng, opt.min_vertices, opt.max_vertices);
        std::size_t k = std::min<std::size_t>(n, detail::draw(rng, opt.min_terminals, opt.max_terminals));
        Instance inst;
        switch (opt.family) {
            case Family::RandomSparse: inst = random_sparse(rng, n, detail::draw(rng, 0, n / 2), k, opt.max_weight); break;
            case Family::Grid: {
                std::size_t rows = std::max<std::size_t>(1, detail::draw(rng, 2, std::max<std::size_t>(2, n / 3)));
                std::size_t cols = std::max<std::size_t>(2, n / rows);
                inst = grid(rng, rows, cols, std::min(k, rows * cols), opt.max_weight);
                break;
            }
            case Family::TreePlusChords: inst = tree_plus_chords(rng, n, detail::draw(rng, 0, n / 3), k, opt.max_weight); break;
        }
        inst.name = std::string(to_string(opt.family)) + "-" + std::to_string(seed) + "-" + std::to_string(i);
        out.push_back(std::move(inst));
    }
    return out;
}

}  // namespace steiner
