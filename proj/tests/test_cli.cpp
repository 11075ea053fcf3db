#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_commands.hpp"

namespace fs = std::filesystem;
using steiner::cli::run_cli;

namespace {

struct CliRun {
    int code;
    std::string out, err;
};

CliRun run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("steiner-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    // 0-1-2-3 path plus a heavy chord, labels 1..4.
    std::string small_graph() const {
        std::string p = path("small.stp");
        std::ofstream(p) << "SECTION Graph\nNodes 4\nE 1 2 1\nE 2 3 2\nE 3 4 1\nE 1 4 9\nEND\n"
                            "SECTION Terminals\nT 1\nT 4\nEND\nEOF\n";
        return p;
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, DecomposeSummaryParsesBack) {
    CliRun r = run({"decompose", small_graph(), "-o", path("small.td")});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream summary(r.out.empty() ? r.err : r.out);
    std::string w, h, n;
    int width = -1, height = -1, nodes = -1;
    summary >> w >> width >> h >> height >> n >> nodes;
    EXPECT_EQ(w, "width");
    EXPECT_GE(width, 1);
    EXPECT_GE(nodes, 1);
    std::ifstream td(path("small.td"));
    steiner::TdFile back = steiner::read_td(td);
    EXPECT_EQ(back.td.width(), width);
    EXPECT_EQ(static_cast<int>(back.td.size()), nodes);
    EXPECT_TRUE(back.nice.has_value());
}

TEST_F(Cli, UnreadableInputIsUsageError) {
    CliRun r = run({"decompose", path("missing.stp")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("missing.stp"), std::string::npos);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
}

TEST_F(Cli, IndexAndQuery) {
    std::string g = small_graph();
    ASSERT_EQ(run({"index", g, "-o", path("small.idx"), "--l", "3"}).code, 0);
    CliRun q = run({"query", "--index", path("small.idx"), "--graph", g, "--verify"});
    ASSERT_EQ(q.code, 0) << q.err;
    EXPECT_NE(q.out.find("weight 4\n"), std::string::npos) << q.out;
    EXPECT_NE(q.out.find("edges 3\n"), std::string::npos);

    CliRun stats = run({"query", "--index", path("small.idx"), "--graph", g, "--terminals", "1,3", "--stats"});
    ASSERT_EQ(stats.code, 0) << stats.err;
    std::string last = stats.out.substr(stats.out.rfind('{'));
    nlohmann::json j = nlohmann::json::parse(last);
    EXPECT_EQ(j["terminals"], 2);
    EXPECT_TRUE(j.contains("stvs_calls"));
}

TEST_F(Cli, QueryOverCapacitySuggestsRebuild) {
    std::string g = small_graph();
    ASSERT_EQ(run({"index", g, "-o", path("small.idx"), "--l", "2"}).code, 0);
    CliRun r = run({"query", "--index", path("small.idx"), "--graph", g, "--terminals", "1,2,4"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--l"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("--fallback dw"), std::string::npos) << r.err;
    CliRun fb = run({"query", "--index", path("small.idx"), "--graph", g, "--terminals", "1,2,4", "--fallback", "dw"});
    EXPECT_EQ(fb.code, 0) << fb.err;
    EXPECT_NE(fb.out.find("weight 4\n"), std::string::npos);
}

TEST_F(Cli, QueryAgainstEditedGraphIsRefused) {
    std::string g = small_graph();
    ASSERT_EQ(run({"index", g, "-o", path("small.idx")}).code, 0);
    std::string edited = path("edited.stp");
    std::ofstream(edited) << "SECTION Graph\nNodes 4\nE 1 2 1\nE 2 3 3\nE 3 4 1\nE 1 4 9\nEND\nEOF\n";
    CliRun r = run({"query", "--index", path("small.idx"), "--graph", edited, "--terminals", "1,4"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("hash"), std::string::npos) << r.err;
}

TEST_F(Cli, OracleEngines) {
    std::string g = small_graph();
    for (std::string engine : {"dw", "brute"}) {
        CliRun r = run({"oracle", g, "--engine", engine});
        ASSERT_EQ(r.code, 0) << r.err;
        EXPECT_NE(r.out.find("weight 4\n"), std::string::npos);
    }
}

TEST_F(Cli, GenIsDeterministic) {
    ASSERT_EQ(run({"--seed", "9", "gen", "--count", "4", "-o", path("a")}).code, 0);
    ASSERT_EQ(run({"--seed", "9", "gen", "--count", "4", "-o", path("b")}).code, 0);
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(path("a"))) {
        ++files;
        EXPECT_EQ(slurp(entry.path()), slurp(fs::path(path("b")) / entry.path().filename()));
    }
    EXPECT_EQ(files, 4U);
}

TEST_F(Cli, GenFixedGrid) {
    ASSERT_EQ(run({"gen", "--rows", "3", "--cols", "3", "--count", "1", "-o", path("g")}).code, 0);
    fs::path file = *fs::directory_iterator(path("g"));
    steiner::Instance inst = steiner::load_instance(file.string());
    EXPECT_EQ(inst.graph.vertex_count(), 9U);
    EXPECT_EQ(inst.graph.edge_count(), 12U);
}

TEST_F(Cli, VerifySmallCorpus) {
    CliRun r = run({"--seed", "4", "verify", "--count", "8", "--max-vertices", "10"});
    ASSERT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("instances 24 mismatches 0"), std::string::npos) << r.out;
}

TEST_F(Cli, BenchWritesCsv) {
    CliRun r = run({"--jobs", "2", "bench", "--count", "3", "--max-vertices", "12", "-o", path("b.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream csv(slurp(path("b.csv")));
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, steiner::cli::kBenchHeader);
    std::size_t rows = 0;
    for (std::string line; std::getline(csv, line);) {
        ++rows;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), std::count(header.begin(), header.end(), ','));
    }
    EXPECT_GE(rows, 3U);
}
