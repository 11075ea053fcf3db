#include <gtest/gtest.h>

#include <sstream>

#include "test_support.hpp"

using namespace steiner;

namespace {

std::string stp(const std::string& graph_body, const std::string& terminals = "") {
    std::string out = "33D32945 STP File, STP Format Version 1.0\nSECTION Graph\n" + graph_body + "END\n";
    if (!terminals.empty()) out += "SECTION Terminals\n" + terminals + "END\n";
    return out + "EOF\n";
}

std::string error_of(const std::string& text) {
    try {
        parse_stp(text);
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(ParseStp, ThreeNodePath) {
    Instance inst = parse_stp(stp("Nodes 3\nEdges 2\nE 1 2 1\nE 2 3 1\n", "Terminals 2\nT 3\nT 1\n"));
    EXPECT_EQ(inst.graph.vertex_count(), 3U);
    EXPECT_EQ(inst.graph.edge_count(), 2U);
    EXPECT_EQ(inst.graph.edges()[0].w, Weight(1));
    EXPECT_EQ(inst.graph.edges()[1].w, Weight(1));
    EXPECT_EQ(inst.terminals, (std::vector<VertexId>{2, 0}));  // file order kept
}

TEST(ParseStp, DuplicateEdgeKeepsMinimum) {
    Instance inst = parse_stp(stp("Nodes 2\nEdges 2\nE 1 2 5\nE 2 1 3\n"));
    ASSERT_EQ(inst.graph.edge_count(), 1U);
    EXPECT_EQ(inst.graph.edges()[0].w, Weight(3));
}

TEST(ParseStp, RationalWeightsShareAScale) {
    Instance inst = parse_stp(stp("Nodes 3\nEdges 2\nE 1 2 0.5\nE 2 3 1.5\n"));
    EXPECT_EQ(inst.graph.scale(), 2U);
    EXPECT_EQ(inst.graph.edges()[0].w, Weight(1));
    EXPECT_EQ(inst.graph.edges()[1].w, Weight(3));
    EXPECT_EQ(format_weight(Weight(3), 2), "3/2");
    EXPECT_EQ(format_weight(Weight(4), 2), "2");

    Instance frac = parse_stp(stp("Nodes 3\nE 1 2 1/3\nE 2 3 1/2\n"));
    EXPECT_EQ(frac.graph.scale(), 6U);
    EXPECT_EQ(frac.graph.edges()[0].w, Weight(2));
    EXPECT_EQ(frac.graph.edges()[1].w, Weight(3));
}

TEST(ParseStp, KeywordsAreCaseInsensitive) {
    Instance inst = parse_stp(
        "section comment\nname \"tiny\"\nend\nsection GRAPH\nnodes 2\ne 1 2 4\nend\nSection Terminals\nt 1\nt 2\nend\neof\n");
    EXPECT_EQ(inst.name, "tiny");
    EXPECT_EQ(inst.graph.edge_count(), 1U);
    EXPECT_EQ(inst.terminals.size(), 2U);
}

TEST(ParseStp, SkipsUnknownSections) {
    Instance inst = parse_stp("SECTION Coordinates\nDD 1 0 0\nEND\n" + stp("Nodes 2\nE 1 2 4\n"));
    EXPECT_EQ(inst.graph.edge_count(), 1U);
}

TEST(ParseStp, ErrorsCarryLineNumbers) {
    EXPECT_NE(error_of(stp("Nodes 3\nE 1 2 0\n")).find("line 4: non-positive weight"), std::string::npos);
    EXPECT_NE(error_of(stp("Nodes 3\nE 1 2 -2\n")).find("non-positive weight"), std::string::npos);
    EXPECT_NE(error_of(stp("Nodes 3\nE 1 5 2\n")).find("line 4: node 5 out of declared range"), std::string::npos);
    EXPECT_NE(error_of(stp("Nodes 3\nE 1 2\n")).find("line 4:"), std::string::npos);
    EXPECT_NE(error_of(stp("Nodes 3\nE 1 2 abc\n")).find("bad weight"), std::string::npos);
    EXPECT_NE(error_of(stp("Nodes 3\nA 1 2 1\n")).find("directed"), std::string::npos);
    EXPECT_NE(error_of(stp("Nodes 2\nE 1 2 1\n", "T 7\n")).find("out of declared range"), std::string::npos);
    EXPECT_NE(error_of("SECTION Graph\nNodes 2\n").find("unterminated"), std::string::npos);
    EXPECT_NE(error_of("EOF\n").find("no Graph section"), std::string::npos);
}

TEST(ParseEdgeList, RenumbersLabelsInAscendingOrder) {
    std::istringstream in("# comment\n10 30 2\n30 20 1.5  # trailing\n\n");
    Graph g = parse_edge_list(in);
    EXPECT_EQ(g.vertex_count(), 3U);
    EXPECT_EQ(g.scale(), 2U);
    EXPECT_EQ(g.label(0), 10);
    EXPECT_EQ(g.label(1), 20);
    EXPECT_EQ(g.label(2), 30);
    EXPECT_EQ(*g.edge_weight(0, 2), Weight(4));
    EXPECT_EQ(*g.edge_weight(1, 2), Weight(3));
    EXPECT_EQ(g.find_label(20), std::optional<VertexId>(1));
    std::istringstream bad("1 2\n");
    EXPECT_THROW(parse_edge_list(bad), InputError);
}

TEST(WriteStp, RoundTrips) {
    Rng rng(3);
    Instance inst = random_sparse(rng, 12, 6, 4);
    inst.name = "rt";
    std::ostringstream out;
    write_stp(out, inst);
    Instance back = parse_stp(out.str());
    EXPECT_EQ(back.name, "rt");
    EXPECT_EQ(back.graph, inst.graph);
    EXPECT_EQ(back.terminals, inst.terminals);
}

TEST(WriteStp, RoundTripsRationalWeights) {
    Instance inst = parse_stp(stp("Nodes 3\nE 1 2 0.25\nE 2 3 3\n", "T 1\nT 3\n"));
    std::ostringstream out;
    write_stp(out, inst);
    EXPECT_NE(out.str().find("E 1 2 1/4"), std::string::npos);
    EXPECT_EQ(parse_stp(out.str()).graph, inst.graph);
}

TEST(TdFormat, RoundTripsNiceDecomposition) {
    Rng rng(8);
    Instance inst = random_sparse(rng, 15, 10, 2);
    NiceTreeDecomposition ntd = to_nice(decompose(inst.graph));
    std::stringstream io;
    write_td(io, ntd, inst.graph.vertex_count());
    TdFile back = read_td(io);
    EXPECT_EQ(back.vertex_count, 15U);
    EXPECT_EQ(back.td, ntd.tree());
    ASSERT_TRUE(back.nice.has_value());
    EXPECT_EQ(*back.nice, ntd);
}

TEST(TdFormat, PlainDecompositionHasNoKinds) {
    Graph g = steiner::testing::graph_of(3, {{0, 1, 1}, {1, 2, 1}});
    TreeDecomposition td = decompose(g);
    std::stringstream io;
    write_td(io, td, 3);
    EXPECT_NE(io.str().find("s td " + std::to_string(td.size()) + " 2 3"), std::string::npos);
    TdFile back = read_td(io);
    EXPECT_FALSE(back.nice.has_value());
    EXPECT_EQ(back.td, td);
}

TEST(TdFormat, RejectsMalformedInput) {
    auto fails = [](const std::string& text) {
        std::istringstream in(text);
        EXPECT_THROW(read_td(in), InputError) << text;
    };
    fails("b 1 1\n");
    fails("s td 1 2 2\nb 2 1\n");
    fails("s td 1 2 2\nb 1 3\n");
    fails("s td 2 2 2\nb 1 1\nb 2 2\n");  // two roots
    fails("s td 2 2 2\nb 1 1\nb 2 2\ne 1 2\ne 1 2\n");
    fails("s td 1 2 2\nb 1 1\nk 1 wiggle\n");
    fails("s td 1 2 2\nx\n");
}

TEST(Corpus, SameSeedSameFiles) {
    CorpusOptions opt;
    opt.count = 5;
    for (Family f : {Family::RandomSparse, Family::Grid, Family::TreePlusChords}) {
        opt.family = f;
        auto a = gen_corpus(42, opt);
        auto b = gen_corpus(42, opt);
        ASSERT_EQ(a.size(), 5U);
        for (std::size_t i = 0; i < a.size(); ++i) {
            std::ostringstream sa, sb;
            write_stp(sa, a[i]);
            write_stp(sb, b[i]);
            EXPECT_EQ(sa.str(), sb.str());
        }
        auto c = gen_corpus(43, opt);
        std::ostringstream s0, s1;
        write_stp(s0, a[0]);
        write_stp(s1, c[0]);
        EXPECT_NE(s0.str(), s1.str());
    }
}

TEST(Corpus, GridCounts) {
    Rng rng(1);
    Instance g = grid(rng, 3, 3, 2);
    EXPECT_EQ(g.graph.vertex_count(), 9U);
    EXPECT_EQ(g.graph.edge_count(), 12U);
}

TEST(Corpus, InstancesAreConnectedWithPositiveWeights) {
    CorpusOptions opt;
    opt.count = 60;
    for (Family f : {Family::RandomSparse, Family::Grid, Family::TreePlusChords}) {
        opt.family = f;
        for (const Instance& inst : gen_corpus(7, opt)) {
            UnionFind uf(inst.graph.vertex_count());
            std::size_t merges = 0;
            for (const Edge& e : inst.graph.edges()) {
                EXPECT_GE(e.w.value(), 1U);
                EXPECT_LE(e.w.value(), 10U);
                merges += uf.unite(e.u, e.v);
            }
            EXPECT_EQ(merges + 1, inst.graph.vertex_count()) << inst.name;
            EXPECT_GE(inst.terminals.size(), 2U);
            EXPECT_LE(inst.terminals.size(), 5U);
        }
    }
    EXPECT_EQ(parse_family("grid"), Family::Grid);
    EXPECT_THROW(parse_family("torus"), InputError);
}
