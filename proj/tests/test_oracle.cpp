#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace steiner;
using steiner::testing::graph_of;

namespace {

// Graph small enough for edge-subset enumeration (at most ~14 edges).
Instance tiny(Rng& rng) {
    std::size_t n = 4 + rng() % 5;
    return random_sparse(rng, n, rng() % 5, 2 + rng() % 3);
}

}  // namespace

TEST(DreyfusWagner, TwoTerminalsIsShortestPath) {
    Rng rng(2);
    for (int i = 0; i < 30; ++i) {
        Instance inst = random_sparse(rng, 12, 8, 2);
        VertexId a = inst.terminals[0], b = inst.terminals[1];
        EXPECT_EQ(dreyfus_wagner(inst.graph, inst.terminals).tree.weight, shortest_path(inst.graph, a, b).weight);
    }
}

TEST(DreyfusWagner, TriangleAllTerminals) {
    Graph g = graph_of(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
    VertexId all[] = {0, 1, 2};
    SteinerTree t = dreyfus_wagner(g, all).tree;
    EXPECT_EQ(t.weight, Weight(2));
    EXPECT_EQ(t.edges.size(), 2U);
}

TEST(DreyfusWagner, DegenerateTerminalSets) {
    Graph g = graph_of(3, {{0, 1, 1}, {1, 2, 1}});
    VertexId one[] = {2};
    EXPECT_EQ(dreyfus_wagner(g, one).tree, empty_tree({2}));
    EXPECT_EQ(dreyfus_wagner(g, std::span<const VertexId>{}).tree.weight, Weight::zero());
    VertexId dup[] = {0, 2, 0};
    EXPECT_EQ(dreyfus_wagner(g, dup).tree.weight, Weight(2));
}

TEST(DreyfusWagner, RefusesInfeasibleAndOverCap) {
    Graph g = graph_of(4, {{0, 1, 1}, {2, 3, 1}});
    VertexId split[] = {0, 3};
    EXPECT_THROW(dreyfus_wagner(g, split), InfeasibleError);
    Rng rng(1);
    Instance big = random_sparse(rng, 20, 5, 17);
    EXPECT_THROW(dreyfus_wagner(big.graph, big.terminals), CapacityError);
    EXPECT_THROW(dreyfus_wagner(big.graph, big.terminals, 4), CapacityError);
}

TEST(DreyfusWagner, SingletonRowsAreShortestPathRows) {
    Rng rng(6);
    for (int i = 0; i < 20; ++i) {
        Instance inst = random_sparse(rng, 11, 7, 4);
        auto d = steiner::testing::floyd_warshall(inst.graph);
        DWResult r = dreyfus_wagner(inst.graph, inst.terminals);
        const auto& terms = r.table.terminals();
        for (std::size_t j = 0; j < terms.size(); ++j)
            for (VertexId v = 0; v < inst.graph.vertex_count(); ++v)
                EXPECT_EQ(r.table.cost(SubsetMask{1} << j, v).value(), d[terms[j]][v]);
    }
}

TEST(DreyfusWagner, TableRowsAreMonotoneAndSubsetTreesValid) {
    Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        Instance inst = random_sparse(rng, 11, 7, 5);
        DWResult r = dreyfus_wagner(inst.graph, inst.terminals);
        const SubsetMask full = (SubsetMask{1} << r.table.terminals().size()) - 1;
        for (SubsetMask m = 1; m < full; ++m) {
            for (VertexId v = 0; v < inst.graph.vertex_count(); ++v)
                for (SubsetMask sub = (m - 1) & m; sub != 0; sub = (sub - 1) & m)
                    EXPECT_LE(r.table.cost(sub, v), r.table.cost(m, v));
            SteinerTree t = r.table.tree(m);
            EXPECT_EQ(t.weight, r.table.optimum(m));
            EXPECT_EQ(t.terminals, r.table.members(m));
            EXPECT_FALSE(tree_defect(t, &inst.graph).has_value());
        }
    }
}

TEST(BruteForce, SimpleCases) {
    Graph star = graph_of(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}});
    VertexId leaves[] = {1, 2, 3};
    EXPECT_EQ(brute_force_steiner(star, leaves).weight, Weight(3));
    VertexId one[] = {1};
    EXPECT_EQ(brute_force_steiner(star, one), empty_tree({1}));
    Graph cyc = graph_of(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {0, 3, 1}});
    VertexId opposite[] = {0, 2};
    EXPECT_EQ(brute_force_steiner(cyc, opposite).weight, Weight(2));
    // Tie between 0-1-2 and 0-3-2: lexicographically smaller edge list wins.
    EXPECT_EQ(brute_force_steiner(cyc, opposite).edges,
              (std::vector<Edge>{make_edge(0, 1, Weight(1)), make_edge(1, 2, Weight(1))}));
}

TEST(BruteForce, RefusesLargeAndInfeasible) {
    Rng rng(3);
    Instance big = random_sparse(rng, 17, 3, 2);
    EXPECT_THROW(brute_force_steiner(big.graph, big.terminals), CapacityError);
    Graph g = graph_of(4, {{0, 1, 1}, {2, 3, 1}});
    VertexId split[] = {1, 2};
    EXPECT_THROW(brute_force_steiner(g, split), InfeasibleError);
}

TEST(BruteForce, MatchesSubtreeEnumeration) {
    Rng rng(31);
    for (int i = 0; i < 80; ++i) {
        Instance inst = tiny(rng);
        SteinerTree t = brute_force_steiner(inst.graph, inst.terminals);
        EXPECT_EQ(t.weight.value(), steiner::testing::subtree_enumeration(inst.graph, inst.terminals));
        EXPECT_FALSE(tree_defect(t, &inst.graph).has_value());
    }
}

TEST(DreyfusWagner, MatchesBruteForce) {
    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        std::size_t n = 4 + rng() % 9;
        Instance inst = random_sparse(rng, n, rng() % (n + 1), 2 + rng() % 3);
        SteinerTree dw = dreyfus_wagner(inst.graph, inst.terminals).tree;
        SteinerTree bf = brute_force_steiner(inst.graph, inst.terminals);
        EXPECT_EQ(dw.weight, bf.weight) << "instance " << i;
        EXPECT_FALSE(tree_defect(dw, &inst.graph).has_value());
        std::vector<VertexId> sorted = inst.terminals;
        std::sort(sorted.begin(), sorted.end());
        EXPECT_EQ(dw.terminals, sorted);
    }
}

TEST(DreyfusWagner, MonotoneAndSubadditive) {
    Rng rng(44);
    for (int i = 0; i < 30; ++i) {
        Instance inst = random_sparse(rng, 12, 8, 5);
        auto w = [&](const std::vector<VertexId>& s) { return dreyfus_wagner(inst.graph, s).tree.weight; };
        const auto& s = inst.terminals;
        Weight whole = w(s);
        for (const auto& sub : steiner::testing::subsets(s, 2, s.size() - 1)) EXPECT_LE(w(sub), whole);
        // S' and S'' overlapping in s[2].
        std::vector<VertexId> a{s[0], s[1], s[2]}, b{s[2], s[3], s[4]};
        EXPECT_LE(whole, w(a) + w(b));
    }
}

TEST(DreyfusWagner, ScalingMultipliesOptimum) {
    Rng rng(8);
    for (int i = 0; i < 20; ++i) {
        Instance inst = random_sparse(rng, 14, 10, 4);
        EXPECT_EQ(dreyfus_wagner(inst.graph.scaled(7), inst.terminals).tree.weight,
                  dreyfus_wagner(inst.graph, inst.terminals).tree.weight.scaled(7));
    }
}
