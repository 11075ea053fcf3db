#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace steiner;
using steiner::testing::graph_of;

namespace {

SteinerTree tree_of(std::vector<VertexId> terms, std::vector<Edge> edges) {
    SteinerTree t{std::move(terms), std::move(edges), Weight::zero()};
    std::sort(t.edges.begin(), t.edges.end(), edge_endpoints_less);
    for (const Edge& e : t.edges) t.weight += e.w;
    return t;
}

}  // namespace

TEST(Weight, AdditionIsCheckedAndInfinityAbsorbs) {
    EXPECT_EQ(Weight(2) + Weight(3), Weight(5));
    EXPECT_TRUE((Weight(7) + Weight::infinity()).is_infinite());
    Weight big(std::numeric_limits<std::uint64_t>::max() - 1);
    EXPECT_THROW(big + Weight(1), OverflowError);
    EXPECT_THROW(big.scaled(2), OverflowError);
    EXPECT_EQ(Weight(6).scaled(7), Weight(42));
    EXPECT_LT(Weight(3), Weight::infinity());
    EXPECT_EQ(Weight::infinity().to_string(), "inf");
}

TEST(UnionFind, TracksComponents) {
    UnionFind uf(5);
    EXPECT_TRUE(uf.unite(0, 1));
    EXPECT_TRUE(uf.unite(3, 4));
    EXPECT_FALSE(uf.unite(1, 0));
    EXPECT_TRUE(uf.same(0, 1));
    EXPECT_FALSE(uf.same(1, 3));
}

TEST(Graph, NormalizesEdges) {
    std::vector<Edge> edges{{1, 0, Weight(5)}, make_edge(0, 1, Weight(3)), make_edge(1, 2, Weight(1))};
    Graph g(3, edges);
    EXPECT_EQ(g.edge_count(), 2U);
    EXPECT_EQ(g.edges()[0].u, 0U);
    EXPECT_EQ(g.edges()[0].v, 1U);
    EXPECT_EQ(*g.edge_weight(1, 0), Weight(3));
    EXPECT_FALSE(g.edge_weight(0, 2).has_value());
    ASSERT_EQ(g.neighbors(1).size(), 2U);
    EXPECT_EQ(g.neighbors(1)[0].to, 0U);
    EXPECT_EQ(g.label(2), 3);
}

TEST(Graph, RejectsBadEdges) {
    std::vector<Edge> loop{{1, 1, Weight(1)}};
    EXPECT_THROW(Graph(2, loop), InputError);
    std::vector<Edge> zero{make_edge(0, 1, Weight(0))};
    EXPECT_THROW(Graph(2, zero), InputError);
    std::vector<Edge> range{make_edge(0, 5, Weight(1))};
    EXPECT_THROW(Graph(2, range), InputError);
}

TEST(GraphUnion, IdempotentOnSameTree) {
    SteinerTree t = tree_of({0, 2}, {make_edge(0, 1, Weight(2)), make_edge(1, 2, Weight(3))});
    Subgraph u = graph_union(t, t);
    EXPECT_TRUE(u.connected);
    EXPECT_EQ(u.weight, t.weight);
    EXPECT_EQ(u.edges, t.edges);
}

TEST(GraphUnion, JoinsAtSharedVertex) {
    SteinerTree a = tree_of({0, 1}, {make_edge(0, 1, Weight(2))});
    SteinerTree b = tree_of({1, 2}, {make_edge(1, 2, Weight(3))});
    Subgraph u = graph_union(a, b);
    EXPECT_TRUE(u.connected);
    EXPECT_EQ(u.weight, Weight(5));
    EXPECT_EQ(u.edges.size(), 2U);
    EXPECT_EQ(u.terminals, (std::vector<VertexId>{0, 1, 2}));
}

TEST(GraphUnion, SharedEdgeCountedOnce) {
    SteinerTree a = tree_of({0, 2}, {make_edge(0, 1, Weight(4)), make_edge(1, 2, Weight(1))});
    SteinerTree b = tree_of({0, 3}, {make_edge(0, 1, Weight(4)), make_edge(1, 3, Weight(1))});
    Subgraph u = graph_union(a, b);
    EXPECT_LT(u.weight, a.weight + b.weight);
    EXPECT_EQ(u.weight, Weight(6));
}

TEST(GraphUnion, FlagsDisjointTrees) {
    SteinerTree a = tree_of({0, 1}, {make_edge(0, 1, Weight(1))});
    SteinerTree b = tree_of({2, 3}, {make_edge(2, 3, Weight(1))});
    EXPECT_FALSE(graph_union(a, b).connected);
    EXPECT_THROW(prune_to_tree(graph_union(a, b)), InfeasibleError);
}

TEST(PruneToTree, IdentityOnTrees) {
    SteinerTree t = tree_of({0, 3}, {make_edge(0, 1, Weight(2)), make_edge(1, 3, Weight(5))});
    EXPECT_EQ(prune_to_tree(graph_union(t, t)), t);
}

TEST(PruneToTree, TriangleDropsSteinerLeaf) {
    Subgraph tri{{0, 1}, {make_edge(0, 1, Weight(1)), make_edge(0, 2, Weight(1)), make_edge(1, 2, Weight(1))}, Weight(3), true};
    SteinerTree t = prune_to_tree(tri);
    ASSERT_EQ(t.edges.size(), 1U);
    EXPECT_EQ(t.edges[0].u, 0U);
    EXPECT_EQ(t.edges[0].v, 1U);
    EXPECT_EQ(t.weight, Weight(1));
}

TEST(PruneToTree, FourCycleKeepsCheapPath) {
    // 0-1 (9) is the heavy edge; the cheap side 0-3-2-1 weighs 3.
    Subgraph cyc{{0, 1},
                 {make_edge(0, 1, Weight(9)), make_edge(1, 2, Weight(1)), make_edge(2, 3, Weight(1)), make_edge(0, 3, Weight(1))},
                 Weight(12),
                 true};
    SteinerTree t = prune_to_tree(cyc);
    EXPECT_EQ(t.weight, Weight(3));
    Graph g(4, cyc.edges);
    EXPECT_EQ(t.weight.value(), steiner::testing::subtree_enumeration(g, {0, 1}));
    EXPECT_FALSE(tree_defect(t, &g).has_value());
}

TEST(PruneToTree, NeverIncreasesWeight) {
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        Instance inst = random_sparse(rng, 9, 6, 3);
        std::vector<Edge> all(inst.graph.edges().begin(), inst.graph.edges().end());
        Weight total = Weight::zero();
        for (const Edge& e : all) total += e.w;
        std::vector<VertexId> terms = inst.terminals;
        std::sort(terms.begin(), terms.end());
        SteinerTree t = prune_to_tree(Subgraph{terms, all, total, true});
        EXPECT_LE(t.weight, total);
        EXPECT_FALSE(tree_defect(t, &inst.graph).has_value()) << *tree_defect(t, &inst.graph);
        EXPECT_EQ(t.weight.value(), steiner::testing::tree_edge_sum(t));
    }
}

TEST(TreeDefect, DetectsBrokenTrees) {
    Graph g = graph_of(4, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {2, 3, 1}});
    SteinerTree good = tree_of({0, 2}, {make_edge(0, 1, Weight(1)), make_edge(1, 2, Weight(1))});
    EXPECT_FALSE(tree_defect(good, &g).has_value());
    SteinerTree cyclic = tree_of({0, 2}, {make_edge(0, 1, Weight(1)), make_edge(1, 2, Weight(1)), make_edge(0, 2, Weight(1))});
    EXPECT_TRUE(tree_defect(cyclic, &g).has_value());
    SteinerTree split = tree_of({0, 3}, {make_edge(0, 1, Weight(1)), make_edge(2, 3, Weight(1))});
    EXPECT_TRUE(tree_defect(split, &g).has_value());
    SteinerTree missing = tree_of({0, 3}, {make_edge(0, 1, Weight(1))});
    EXPECT_TRUE(tree_defect(missing, &g).has_value());
    SteinerTree wrong_weight = good;
    wrong_weight.weight = Weight(5);
    EXPECT_TRUE(tree_defect(wrong_weight, &g).has_value());
    SteinerTree foreign = tree_of({0, 3}, {make_edge(0, 3, Weight(1))});
    EXPECT_TRUE(tree_defect(foreign, &g).has_value());
    EXPECT_FALSE(tree_defect(empty_tree({2}), &g).has_value());
}

TEST(ShortestPath, PathGraph) {
    Graph g = graph_of(3, {{0, 1, 2}, {1, 2, 3}});
    SteinerTree t = shortest_path(g, 0, 2);
    EXPECT_EQ(t.weight, Weight(5));
    EXPECT_EQ(t.edges.size(), 2U);
    EXPECT_EQ(t.terminals, (std::vector<VertexId>{0, 2}));
}

TEST(ShortestPath, RejectsSameEndpointAndDisconnected) {
    Graph g = graph_of(4, {{0, 1, 2}, {2, 3, 3}});
    EXPECT_THROW(shortest_path(g, 1, 1), InputError);
    EXPECT_THROW(shortest_path(g, 0, 3), InfeasibleError);
}

TEST(ShortestPath, TieBreakPrefersSmallerPredecessor) {
    // Two equal routes 0-1-3 and 0-2-3; vertex 3's predecessor must be 1.
    Graph g = graph_of(4, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 3, 1}});
    SteinerTree t = shortest_path(g, 0, 3);
    EXPECT_EQ(t.edges, (std::vector<Edge>{make_edge(0, 1, Weight(1)), make_edge(1, 3, Weight(1))}));
}

TEST(ShortestPath, MatchesFloydWarshallAndIsSymmetric) {
    Rng rng(99);
    for (int i = 0; i < 40; ++i) {
        Instance inst = random_sparse(rng, 10, 8, 2);
        auto d = steiner::testing::floyd_warshall(inst.graph);
        for (VertexId u = 0; u < 10; ++u)
            for (VertexId v = u + 1; v < 10; ++v) {
                SteinerTree a = shortest_path(inst.graph, u, v);
                SteinerTree b = shortest_path(inst.graph, v, u);
                EXPECT_EQ(a.weight.value(), d[u][v]);
                EXPECT_EQ(a.weight, b.weight);
                EXPECT_FALSE(tree_defect(a, &inst.graph).has_value());
            }
    }
}

TEST(Graph, ScalingMultipliesShortestPaths) {
    Rng rng(4);
    Instance inst = random_sparse(rng, 12, 10, 2);
    Graph scaled = inst.graph.scaled(7);
    for (VertexId v = 1; v < 12; ++v)
        EXPECT_EQ(shortest_path(scaled, 0, v).weight, shortest_path(inst.graph, 0, v).weight.scaled(7));
}

TEST(Graph, Components) {
    Graph g = graph_of(5, {{0, 1, 1}, {3, 4, 1}});
    EXPECT_EQ(component_ids(g), (std::vector<std::size_t>{0, 0, 1, 2, 2}));
    EXPECT_FALSE(is_connected(g));
    EXPECT_TRUE(is_connected(graph_of(2, {{0, 1, 1}})));
}
