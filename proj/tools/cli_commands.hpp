#pragma once

// Subcommands of steiner_cli. run_cli() is the whole program minus main(),
// so the tests can drive it in-process.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "steiner/steiner.hpp"

namespace steiner::cli {

enum ExitCode : int { kOk = 0, kMismatch = 1, kUsage = 2 };

struct RunConfig {
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    bool quiet = false;
    std::string heuristic = "min-degree";
    std::size_t l = 5;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

inline Heuristic parse_heuristic(const std::string& name) {
    if (name == "min-degree") return Heuristic::MinDegree;
    if (name == "min-fill") return Heuristic::MinFill;
    throw InputError("unknown heuristic '" + name + "' (expected min-degree or min-fill)");
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !out.write(bytes.data(), static_cast<std::streamsize>(bytes.size())))
        throw InputError("cannot write " + path);
}

// "3,7,9" in graph labels -> vertex ids.
inline std::vector<VertexId> parse_terminals(const Graph& g, const std::string& list) {
    std::vector<VertexId> out;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::int64_t label = 0;
        try {
            std::size_t used = 0;
            label = std::stoll(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw InputError("bad terminal '" + tok + "'");
        }
        auto v = g.find_label(label);
        if (!v) throw InputError("terminal " + tok + " is not a vertex of the graph");
        out.push_back(*v);
    }
    return out;
}

inline void print_tree(std::ostream& out, const Graph& g, const SteinerTree& tree) {
    out << "weight " << format_weight(tree.weight, g.scale()) << "\n";
    out << "edges " << tree.edges.size() << "\n";
    for (const Edge& e : tree.edges)
        out << g.label(e.u) << " " << g.label(e.v) << " " << format_weight(e.w, g.scale()) << "\n";
}

inline NiceTreeDecomposition decomposition_for(const Graph& g, const std::string& td_path, const std::string& heuristic) {
    if (td_path.empty()) return to_nice(decompose(g, parse_heuristic(heuristic)));
    std::ifstream in(td_path);
    if (!in) throw InputError("cannot open " + td_path);
    TdFile file = read_td(in);
    if (file.vertex_count != g.vertex_count()) throw InputError("decomposition was written for a different vertex count");
    if (auto v = validate_decomposition(g, file.td); !v.empty())
        throw InputError("decomposition invalid for this graph: " + v.front().message);
    if (file.nice && validate_nice(*file.nice).empty()) return *file.nice;
    return to_nice(file.td);
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads.
template <class Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(count);
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                fn(i);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
}

}  // namespace detail

// ---- decompose ------------------------------------------------------------

struct DecomposeArgs {
    std::string graph;
    std::string out;
    bool plain = false;
};

inline int cmd_decompose(const RunConfig& cfg, const DecomposeArgs& a, std::ostream& out, std::ostream& err) {
    Instance inst = load_instance(a.graph);
    TreeDecomposition td = decompose(inst.graph, detail::parse_heuristic(cfg.heuristic));
    auto violations = validate_decomposition(inst.graph, td);
    NiceTreeDecomposition ntd = to_nice(td);
    auto nice_violations = validate_decomposition(inst.graph, ntd.tree());
    auto structure = validate_nice(ntd);
    violations.insert(violations.end(), nice_violations.begin(), nice_violations.end());
    violations.insert(violations.end(), structure.begin(), structure.end());
    for (const auto& v : violations) err << "violation (" << to_string(v.kind) << "): " << v.message << "\n";

    std::ostringstream text;
    if (a.plain) write_td(text, td, inst.graph.vertex_count());
    else write_td(text, ntd, inst.graph.vertex_count());
    const TreeDecomposition& written = a.plain ? td : ntd.tree();
    if (a.out.empty() || a.out == "-") out << text.str();
    else detail::write_file(a.out, text.str());
    if (!cfg.quiet)
        (a.out.empty() || a.out == "-" ? err : out)
            << "width " << written.width() << " height " << written.height() << " nodes " << written.size() << "\n";
    return violations.empty() ? kOk : kMismatch;
}

// ---- index ----------------------------------------------------------------

struct IndexArgs {
    std::string graph;
    std::string out;
    std::string td;
    std::string dump_json;
};

inline int cmd_index(const RunConfig& cfg, const IndexArgs& a, std::ostream& out, std::ostream&) {
    Instance inst = load_instance(a.graph);
    NiceTreeDecomposition ntd = detail::decomposition_for(inst.graph, a.td, cfg.heuristic);
    auto start = detail::Clock::now();
    SteinerIndex idx = build_index(inst.graph, ntd, cfg.l, cfg.jobs);
    double build_ms = detail::ms_since(start);
    std::string bytes = save_index(idx);
    if (!a.out.empty()) detail::write_file(a.out, bytes);
    if (!a.dump_json.empty()) {
        std::string text = index_to_json(idx).dump(1) + "\n";
        if (a.dump_json == "-") out << text;
        else detail::write_file(a.dump_json, text);
    }
    if (!cfg.quiet && a.dump_json != "-")
        out << "l " << idx.l << " width " << idx.meta.width << " height " << idx.meta.height << " nodes "
            << idx.meta.node_count << " entries " << idx.meta.entry_count << " bytes " << bytes.size() << " ms "
            << static_cast<long long>(build_ms) << "\n";
    return kOk;
}

// ---- query ----------------------------------------------------------------

struct QueryArgs {
    std::string index;
    std::string graph;
    std::string terminals;
    std::string fallback;
    bool verify = false;
    bool stats = false;
};

inline int cmd_query(const RunConfig& cfg, const QueryArgs& a, std::ostream& out, std::ostream& err) {
    Instance inst = load_instance(a.graph);
    const Graph& g = inst.graph;
    std::vector<VertexId> terms = a.terminals.empty() ? inst.terminals : detail::parse_terminals(g, a.terminals);
    if (terms.empty()) throw InputError("no terminals given (use --terminals or a Terminals section)");
    if (!a.fallback.empty() && a.fallback != "dw") throw InputError("unknown fallback '" + a.fallback + "' (expected dw)");
    SteinerIndex idx = load_index(detail::read_file(a.index), g);

    std::vector<VertexId> distinct = terms;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    SteinerTree tree;
    QueryStats stats;
    std::string engine = "index";
    auto start = detail::Clock::now();
    try {
        if (distinct.size() > idx.l && a.fallback == "dw") {
            engine = "dw";
            tree = dreyfus_wagner(g, distinct).tree;
        } else {
            QueryResult r = query(idx, g, distinct);
            tree = std::move(r.tree);
            stats = r.stats;
        }
    } catch (const InfeasibleError& e) {
        out << "infeasible: " << e.what() << "\n";
        return kOk;
    }
    double query_ms = detail::ms_since(start);
    detail::print_tree(out, g, tree);

    int code = kOk;
    if (a.verify) {
        Weight expected = dreyfus_wagner(g, distinct).tree.weight;
        if (expected != tree.weight) {
            err << "verify: MISMATCH engine " << format_weight(tree.weight, g.scale()) << " vs dw "
                << format_weight(expected, g.scale()) << "\n";
            code = kMismatch;
        } else if (!cfg.quiet) {
            err << "verify: ok (dw " << format_weight(expected, g.scale()) << ")\n";
        }
    }
    if (a.stats) {
        nlohmann::json j = {{"engine", engine},
                            {"terminals", distinct.size()},
                            {"h", idx.meta.height},
                            {"width", idx.meta.width},
                            {"nodes_visited", stats.nodes_visited},
                            {"stvs_calls", stats.stvs_calls},
                            {"candidates", stats.candidates},
                            {"query_ms", query_ms}};
        out << j.dump() << "\n";
    }
    return code;
}

// ---- oracle ---------------------------------------------------------------

struct OracleArgs {
    std::string graph;
    std::string terminals;
    std::string engine = "dw";
};

inline int cmd_oracle(const RunConfig&, const OracleArgs& a, std::ostream& out, std::ostream&) {
    Instance inst = load_instance(a.graph);
    std::vector<VertexId> terms = a.terminals.empty() ? inst.terminals : detail::parse_terminals(inst.graph, a.terminals);
    if (terms.empty()) throw InputError("no terminals given (use --terminals or a Terminals section)");
    try {
        SteinerTree tree =
            a.engine == "brute" ? brute_force_steiner(inst.graph, terms) : dreyfus_wagner(inst.graph, terms).tree;
        detail::print_tree(out, inst.graph, tree);
    } catch (const InfeasibleError& e) {
        out << "infeasible: " << e.what() << "\n";
    }
    return kOk;
}

// ---- gen ------------------------------------------------------------------

struct GenArgs {
    std::string out_dir = ".";
    std::string family = "random-sparse";
    CorpusOptions corpus;
    std::size_t rows = 0, cols = 0;
};

inline std::vector<Instance> make_corpus(const RunConfig& cfg, const GenArgs& a) {
    if (a.rows > 0 || a.cols > 0) {
        if (a.rows == 0 || a.cols == 0) throw InputError("--rows and --cols go together");
        Rng rng(cfg.seed);
        std::vector<Instance> out;
        for (std::size_t i = 0; i < a.corpus.count; ++i) {
            std::size_t k = steiner::detail::draw(rng, a.corpus.min_terminals, a.corpus.max_terminals);
            Instance inst = grid(rng, a.rows, a.cols, std::min(k, a.rows * a.cols), a.corpus.max_weight);
            inst.name = "grid" + std::to_string(a.rows) + "x" + std::to_string(a.cols) + "-" + std::to_string(cfg.seed) +
                        "-" + std::to_string(i);
            out.push_back(std::move(inst));
        }
        return out;
    }
    CorpusOptions opt = a.corpus;
    opt.family = parse_family(a.family);
    return gen_corpus(cfg.seed, opt);
}

inline int cmd_gen(const RunConfig& cfg, const GenArgs& a, std::ostream& out, std::ostream&) {
    std::vector<Instance> corpus = make_corpus(cfg, a);
    std::filesystem::create_directories(a.out_dir);
    for (const Instance& inst : corpus) {
        if (!is_connected(inst.graph)) throw InvariantError("generator produced a disconnected instance");
        std::ostringstream text;
        write_stp(text, inst);
        auto path = std::filesystem::path(a.out_dir) / (inst.name + ".stp");
        detail::write_file(path.string(), text.str());
        if (!cfg.quiet) out << path.string() << "\n";
    }
    return kOk;
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
    GenArgs gen;
    std::vector<std::string> families = {"random-sparse", "grid", "tree-plus-chords"};
};

struct VerifyOutcome {
    std::string name;
    std::string engine_weight, dw_weight, brute_weight;
    bool mismatch = false;
};

inline int cmd_verify(const RunConfig& cfg, const VerifyArgs& a, std::ostream& out, std::ostream&) {
    std::vector<Instance> corpus;
    for (const std::string& family : a.families) {
        GenArgs g = a.gen;
        g.family = family;
        auto part = make_corpus(cfg, g);
        std::move(part.begin(), part.end(), std::back_inserter(corpus));
    }
    std::vector<VerifyOutcome> outcomes(corpus.size());
    detail::parallel_for(corpus.size(), cfg.jobs, [&](std::size_t i) {
        const Instance& inst = corpus[i];
        const Graph& g = inst.graph;
        VerifyOutcome& o = outcomes[i];
        o.name = inst.name;
        auto idx = build_index(g, to_nice(decompose(g, detail::parse_heuristic(cfg.heuristic))), cfg.l);
        std::vector<VertexId> terms(inst.terminals.begin(),
                                    inst.terminals.begin() + static_cast<std::ptrdiff_t>(std::min(inst.terminals.size(), cfg.l)));
        Weight engine = terms.size() < 2 ? Weight::zero() : query(idx, g, terms).tree.weight;
        Weight dw = dreyfus_wagner(g, terms).tree.weight;
        o.engine_weight = format_weight(engine, g.scale());
        o.dw_weight = format_weight(dw, g.scale());
        o.mismatch = engine != dw;
        if (g.vertex_count() <= kBruteForceVertexCap) {
            Weight brute = brute_force_steiner(g, terms).weight;
            o.brute_weight = format_weight(brute, g.scale());
            o.mismatch = o.mismatch || brute != dw;
        }
    });
    std::size_t mismatches = 0;
    for (const auto& o : outcomes) {
        if (!o.mismatch) continue;
        ++mismatches;
        out << "MISMATCH " << o.name << " engine " << o.engine_weight << " dw " << o.dw_weight << " brute "
            << (o.brute_weight.empty() ? "-" : o.brute_weight) << "\n";
    }
    if (!cfg.quiet || mismatches)
        out << "verify seed " << cfg.seed << " l " << cfg.l << " instances " << corpus.size() << " mismatches "
            << mismatches << "\n";
    return mismatches == 0 ? kOk : kMismatch;
}

// ---- bench ----------------------------------------------------------------

struct BenchArgs {
    GenArgs gen;
    std::vector<std::string> inputs;
    std::size_t queries = 1;
    std::string out;
    bool no_oracle = false;
};

struct BenchRecord {
    std::string instance;
    std::size_t n = 0, m = 0;
    int width = -1;
    std::uint32_t h = 0;
    std::size_t terminals = 0;
    double index_ms = 0;
    std::size_t index_bytes = 0;
    double query_ms = 0;
    std::size_t stvs_calls = 0;
    double oracle_ms = -1;
    std::string engine_weight, oracle_weight;
};

inline constexpr const char* kBenchHeader =
    "instance,n,m,width,h,terminals,index_ms,index_bytes,query_ms,stvs_calls,oracle_ms,engine_weight,oracle_weight";

inline int cmd_bench(const RunConfig& cfg, const BenchArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<Instance> corpus;
    if (a.inputs.empty()) {
        corpus = make_corpus(cfg, a.gen);
    } else {
        for (const auto& path : a.inputs) corpus.push_back(load_instance(path));
    }
    const std::size_t per = std::max<std::size_t>(1, a.queries);
    std::vector<std::vector<BenchRecord>> rows(corpus.size());
    detail::parallel_for(corpus.size(), cfg.jobs, [&](std::size_t i) {
        const Instance& inst = corpus[i];
        const Graph& g = inst.graph;
        auto t0 = detail::Clock::now();
        SteinerIndex idx = build_index(g, to_nice(decompose(g, detail::parse_heuristic(cfg.heuristic))), cfg.l);
        double index_ms = detail::ms_since(t0);
        std::size_t bytes = save_index(idx).size();
        Rng rng(cfg.seed ^ (0x9E3779B97F4A7C15ULL * (i + 1)));
        for (std::size_t q = 0; q < per; ++q) {
            std::vector<VertexId> terms = inst.terminals;
            if (q > 0 || terms.size() < 2)
                terms = steiner::detail::pick_terminals(rng, g.vertex_count(),
                                                        std::min<std::size_t>(cfg.l, 2 + q % (cfg.l - 1)));
            if (terms.size() > cfg.l) terms.resize(cfg.l);
            BenchRecord r;
            r.instance = per == 1 ? inst.name : inst.name + "/q" + std::to_string(q);
            r.n = g.vertex_count();
            r.m = g.edge_count();
            r.width = idx.meta.width;
            r.h = idx.meta.height;
            r.terminals = terms.size();
            r.index_ms = index_ms;
            r.index_bytes = bytes;
            Weight engine = Weight::infinity();
            auto t1 = detail::Clock::now();
            try {
                QueryResult res = query(idx, g, terms);
                engine = res.tree.weight;
                r.stvs_calls = res.stats.stvs_calls;
            } catch (const InfeasibleError&) {
            }
            r.query_ms = detail::ms_since(t1);
            r.engine_weight = format_weight(engine, g.scale());
            if (!a.no_oracle) {
                Weight oracle = Weight::infinity();
                auto t2 = detail::Clock::now();
                try {
                    oracle = dreyfus_wagner(g, terms).tree.weight;
                } catch (const InfeasibleError&) {
                }
                r.oracle_ms = detail::ms_since(t2);
                r.oracle_weight = format_weight(oracle, g.scale());
            }
            rows[i].push_back(std::move(r));
        }
    });

    std::ostringstream csv;
    csv << kBenchHeader << "\n";
    std::size_t mismatches = 0;
    csv << std::fixed << std::setprecision(3);
    for (const auto& group : rows)  // generation order, which is instance id order
        for (const BenchRecord& r : group) {
            if (!r.oracle_weight.empty() && r.oracle_weight != r.engine_weight) ++mismatches;
            csv << r.instance << "," << r.n << "," << r.m << "," << r.width << "," << r.h << "," << r.terminals << ","
                << r.index_ms << "," << r.index_bytes << "," << r.query_ms << "," << r.stvs_calls << ",";
            if (r.oracle_ms >= 0) csv << r.oracle_ms;
            csv << "," << r.engine_weight << "," << r.oracle_weight << "\n";
        }
    if (a.out.empty() || a.out == "-") out << csv.str();
    else detail::write_file(a.out, csv.str());
    if (mismatches) err << "bench: " << mismatches << " engine/oracle mismatches\n";
    return mismatches == 0 ? kOk : kMismatch;
}

// ---- front end ------------------------------------------------------------

inline void add_corpus_options(CLI::App* sub, GenArgs& g) {
    sub->add_option("--family", g.family, "random-sparse | grid | tree-plus-chords")
        ->check(CLI::IsMember({"random-sparse", "grid", "tree-plus-chords"}));
    sub->add_option("--count", g.corpus.count, "instances to generate")->check(CLI::NonNegativeNumber);
    sub->add_option("--min-vertices", g.corpus.min_vertices)->check(CLI::Range(2, 1 << 20));
    sub->add_option("--max-vertices", g.corpus.max_vertices)->check(CLI::Range(2, 1 << 20));
    sub->add_option("--min-terminals", g.corpus.min_terminals)->check(CLI::Range(1, 64));
    sub->add_option("--max-terminals", g.corpus.max_terminals)->check(CLI::Range(1, 64));
    sub->add_option("--max-weight", g.corpus.max_weight)->check(CLI::Range(1, 1 << 30));
    sub->add_option("--rows", g.rows, "fixed grid rows (with --cols)");
    sub->add_option("--cols", g.cols, "fixed grid columns (with --rows)");
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact Steiner tree queries over a tree-decomposition index", "steiner_cli"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    app.add_option("--seed", cfg.seed, "RNG seed for generated corpora");
    app.add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::Range(1U, 256U));
    app.add_flag("--quiet", cfg.quiet, "suppress summaries");

    auto heuristic_opt = [&](CLI::App* sub) {
        sub->add_option("--heuristic", cfg.heuristic, "min-degree | min-fill")
            ->check(CLI::IsMember({"min-degree", "min-fill"}));
    };
    auto l_opt = [&](CLI::App* sub) {
        sub->add_option("--l", cfg.l, "largest supported terminal count")->check(CLI::Range(2, 16));
    };

    DecomposeArgs dec;
    auto* decompose_cmd = app.add_subcommand("decompose", "write a nice tree decomposition (.td)");
    decompose_cmd->add_option("graph", dec.graph, "graph file (.stp or .edges)")->required();
    decompose_cmd->add_option("-o,--out", dec.out, "output path (default stdout)");
    decompose_cmd->add_flag("--plain", dec.plain, "write the decomposition before the nice transformation");
    heuristic_opt(decompose_cmd);

    IndexArgs ix;
    auto* index_cmd = app.add_subcommand("index", "build and save a Steiner index");
    index_cmd->add_option("graph", ix.graph)->required();
    index_cmd->add_option("-o,--out", ix.out, "index file");
    index_cmd->add_option("--td", ix.td, "use this decomposition instead of computing one");
    index_cmd->add_option("--dump-json", ix.dump_json, "also write the index as JSON ('-' for stdout)");
    heuristic_opt(index_cmd);
    l_opt(index_cmd);

    QueryArgs qa;
    auto* query_cmd = app.add_subcommand("query", "answer one terminal set from an index");
    query_cmd->add_option("--index", qa.index)->required();
    query_cmd->add_option("--graph", qa.graph)->required();
    query_cmd->add_option("--terminals", qa.terminals, "comma-separated vertex labels (default: file terminals)");
    query_cmd->add_option("--fallback", qa.fallback, "dw: solve with Dreyfus-Wagner when |S| > l");
    query_cmd->add_flag("--verify", qa.verify, "compare with Dreyfus-Wagner");
    query_cmd->add_flag("--stats", qa.stats, "print traversal statistics as one JSON line");

    VerifyArgs va;
    va.gen.corpus.count = 40;
    va.gen.corpus.max_vertices = 14;
    auto* verify_cmd = app.add_subcommand("verify", "engine vs Dreyfus-Wagner vs brute force on a generated corpus");
    add_corpus_options(verify_cmd, va.gen);
    verify_cmd->add_option("--families", va.families, "families to include")->delimiter(',');
    heuristic_opt(verify_cmd);
    l_opt(verify_cmd);

    BenchArgs ba;
    auto* bench_cmd = app.add_subcommand("bench", "CSV of index and query costs");
    add_corpus_options(bench_cmd, ba.gen);
    bench_cmd->add_option("inputs", ba.inputs, "instance files (default: generated corpus)");
    bench_cmd->add_option("--queries", ba.queries, "queries per instance")->check(CLI::Range(1, 1000));
    bench_cmd->add_option("-o,--out", ba.out, "CSV path (default stdout)");
    bench_cmd->add_flag("--no-oracle", ba.no_oracle, "skip the Dreyfus-Wagner comparison");
    heuristic_opt(bench_cmd);
    l_opt(bench_cmd);

    OracleArgs oa;
    auto* oracle_cmd = app.add_subcommand("oracle", "solve one instance exactly without an index");
    oracle_cmd->add_option("graph", oa.graph)->required();
    oracle_cmd->add_option("--terminals", oa.terminals);
    oracle_cmd->add_option("--engine", oa.engine)->check(CLI::IsMember({"dw", "brute"}));

    GenArgs ga;
    auto* gen_cmd = app.add_subcommand("gen", "write a seeded instance corpus as .stp files");
    add_corpus_options(gen_cmd, ga);
    gen_cmd->add_option("-o,--out", ga.out_dir, "output directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }
    try {
        if (*decompose_cmd) return cmd_decompose(cfg, dec, out, err);
        if (*index_cmd) return cmd_index(cfg, ix, out, err);
        if (*query_cmd) return cmd_query(cfg, qa, out, err);
        if (*verify_cmd) return cmd_verify(cfg, va, out, err);
        if (*bench_cmd) return cmd_bench(cfg, ba, out, err);
        if (*oracle_cmd) return cmd_oracle(cfg, oa, out, err);
        if (*gen_cmd) return cmd_gen(cfg, ga, out, err);
    } catch (const InvariantError& e) {
        err << "internal error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace steiner::cli
