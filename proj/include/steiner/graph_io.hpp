#pragma once

// Readers and writers for SteinLib STP files and plain `u v w` edge lists.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "steiner/graph.hpp"

namespace steiner {

/// A graph plus the terminal list from its Terminals section (file order).
struct Instance {
    std::string name;
    Graph graph;
    std::vector<VertexId> terminals;
};

namespace detail {

struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;
};

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

[[noreturn]] inline void syntax_error(std::size_t line, const std::string& what) {
    throw InputError("line " + std::to_string(line) + ": " + what);
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, std::size_t line) {
    unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
    if (r > std::numeric_limits<std::uint64_t>::max()) syntax_error(line, "weight too large");
    return static_cast<std::uint64_t>(r);
}

/// Accepts `12`, `0.25`, `.5`, `3/4`. Negative or zero values are rejected.
inline Rational parse_weight(const std::string& token, std::size_t line) {
    Rational r;
    if (token.empty()) syntax_error(line, "missing weight");
    if (token[0] == '-') syntax_error(line, "non-positive weight " + token);
    if (auto slash = token.find('/'); slash != std::string::npos) {
        std::uint64_t a = 0, b = 0;
        std::size_t pa = 0, pb = 0;
        try {
            a = std::stoull(token.substr(0, slash), &pa);
            b = std::stoull(token.substr(slash + 1), &pb);
        } catch (const std::exception&) {
            syntax_error(line, "bad weight " + token);
        }
        if (pa != slash || pb != token.size() - slash - 1 || b == 0) syntax_error(line, "bad weight " + token);
        r = {a, b};
    } else {
        std::uint64_t num = 0, den = 1;
        bool seen_dot = false, seen_digit = false;
        for (char c : token) {
            if (c == '.') {
                if (seen_dot) syntax_error(line, "bad weight " + token);
                seen_dot = true;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                seen_digit = true;
                num = checked_mul(num, 10, line) + static_cast<std::uint64_t>(c - '0');
                if (seen_dot) den = checked_mul(den, 10, line);
            } else {
                syntax_error(line, "bad weight " + token);
            }
        }
        if (!seen_digit) syntax_error(line, "bad weight " + token);
        r = {num, den};
    }
    if (r.num == 0) syntax_error(line, "non-positive weight " + token);
    std::uint64_t g = std::gcd(r.num, r.den);
    return {r.num / g, r.den / g};
}

struct RawEdge {
    std::int64_t a = 0;
    std::int64_t b = 0;
    Rational w;
    std::size_t line = 0;
};

/// Brings all weights to a common denominator.
inline std::pair<std::vector<std::uint64_t>, std::uint64_t> scale_weights(const std::vector<RawEdge>& raw) {
    std::uint64_t scale = 1;
    for (const RawEdge& e : raw) {
        std::uint64_t g = std::gcd(scale, e.w.den);
        scale = checked_mul(scale / g, e.w.den, e.line);
    }
    std::vector<std::uint64_t> scaled;
    scaled.reserve(raw.size());
    for (const RawEdge& e : raw) scaled.push_back(checked_mul(e.w.num, scale / e.w.den, e.line));
    return {scaled, scale};
}

inline std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

inline std::int64_t parse_int(const std::string& token, std::size_t line) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(token, &pos);
        if (pos != token.size()) syntax_error(line, "bad integer " + token);
        return v;
    } catch (const InputError&) {
        throw;
    } catch (const std::exception&) {
        syntax_error(line, "bad integer " + token);
    }
}

}  // namespace detail

/// Parses a SteinLib STP stream. Keywords are case-insensitive; file node
/// numbers are 1-based and become VertexId = number - 1.
inline Instance parse_stp(std::istream& in) {
    using namespace detail;
    Instance inst;
    std::string line;
    std::size_t lineno = 0;
    std::string section;
    std::int64_t nodes = -1;
    std::vector<RawEdge> raw;
    std::vector<std::pair<std::int64_t, std::size_t>> raw_terminals;
    bool saw_graph = false;

    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        std::string key = lower(toks[0]);
        if (section.empty()) {
            if (key == "section") {
                if (toks.size() < 2) syntax_error(lineno, "SECTION without a name");
                section = lower(toks[1]);
                if (section == "graph") saw_graph = true;
            } else if (key == "eof") {
                break;
            }
            // The magic header line and anything else outside sections is ignored.
            continue;
        }
        if (key == "end") {
            section.clear();
            continue;
        }
        if (section == "comment") {
            if (key == "name" && toks.size() > 1) {
                auto first = line.find('"');
                auto last = line.rfind('"');
                inst.name = (first != std::string::npos && last > first) ? line.substr(first + 1, last - first - 1) : toks[1];
            }
        } else if (section == "graph") {
            if (key == "nodes") {
                if (toks.size() != 2) syntax_error(lineno, "expected: Nodes <count>");
                nodes = parse_int(toks[1], lineno);
                if (nodes < 0) syntax_error(lineno, "negative node count");
            } else if (key == "edges" || key == "arcs") {
                if (toks.size() != 2) syntax_error(lineno, "expected: Edges <count>");
                parse_int(toks[1], lineno);
            } else if (key == "e") {
                if (toks.size() != 4) syntax_error(lineno, "expected: E <u> <v> <weight>");
                raw.push_back({parse_int(toks[1], lineno), parse_int(toks[2], lineno), parse_weight(toks[3], lineno), lineno});
            } else if (key == "a") {
                syntax_error(lineno, "directed arcs are not supported");
            } else {
                syntax_error(lineno, "unexpected keyword '" + toks[0] + "' in Graph section");
            }
        } else if (section == "terminals") {
            if (key == "terminals") {
                if (toks.size() != 2) syntax_error(lineno, "expected: Terminals <count>");
                parse_int(toks[1], lineno);
            } else if (key == "t") {
                if (toks.size() != 2) syntax_error(lineno, "expected: T <node>");
                raw_terminals.emplace_back(parse_int(toks[1], lineno), lineno);
            } else if (key != "root") {
                syntax_error(lineno, "unexpected keyword '" + toks[0] + "' in Terminals section");
            }
        }
        // Other sections (Coordinates, Presolve, ...) are skipped.
    }
    if (!section.empty()) syntax_error(lineno, "unterminated SECTION " + section);
    if (!saw_graph || nodes < 0) throw InputError("STP input has no Graph section with a Nodes line");

    auto check_node = [&](std::int64_t id, std::size_t at) {
        if (id < 1 || id > nodes)
            syntax_error(at, "node " + std::to_string(id) + " out of declared range 1.." + std::to_string(nodes));
        return static_cast<VertexId>(id - 1);
    };
    auto [scaled, scale] = scale_weights(raw);
    std::vector<Edge> edges;
    edges.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        VertexId a = check_node(raw[i].a, raw[i].line);
        VertexId b = check_node(raw[i].b, raw[i].line);
        if (a == b) syntax_error(raw[i].line, "self-loop");
        edges.push_back(make_edge(a, b, Weight(scaled[i])));
    }
    for (auto [t, at] : raw_terminals) inst.terminals.push_back(check_node(t, at));
    inst.graph = Graph(static_cast<std::size_t>(nodes), edges, scale);
    return inst;
}

inline Instance parse_stp(const std::string& text) {
    std::istringstream in(text);
    return parse_stp(in);
}

/// Parses `u v w` lines (`#` starts a comment). Labels are arbitrary integers,
/// renumbered densely in ascending label order.
inline Graph parse_edge_list(std::istream& in) {
    using namespace detail;
    std::vector<RawEdge> raw;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks.size() != 3) syntax_error(lineno, "expected: <u> <v> <weight>");
        raw.push_back({parse_int(toks[0], lineno), parse_int(toks[1], lineno), parse_weight(toks[2], lineno), lineno});
    }
    std::map<std::int64_t, VertexId> ids;
    for (const RawEdge& e : raw) {
        if (e.a == e.b) syntax_error(e.line, "self-loop");
        ids.emplace(e.a, 0);
        ids.emplace(e.b, 0);
    }
    std::vector<std::int64_t> labels;
    for (auto& [label, id] : ids) {
        id = static_cast<VertexId>(labels.size());
        labels.push_back(label);
    }
    auto [scaled, scale] = scale_weights(raw);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < raw.size(); ++i) edges.push_back(make_edge(ids[raw[i].a], ids[raw[i].b], Weight(scaled[i])));
    const std::size_t n = labels.size();
    return Graph(n, edges, scale, std::move(labels));
}

/// Dispatches on extension: `.edges` is an edge list, anything else is STP.
inline Instance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    if (path.extension() == ".edges") {
        Instance inst;
        inst.name = path.stem().string();
        inst.graph = parse_edge_list(in);
        return inst;
    }
    Instance inst = parse_stp(in);
    if (inst.name.empty()) inst.name = path.stem().string();
    return inst;
}

/// Weight in original units: an integer, or a reduced `num/den` fraction.
inline std::string format_weight(Weight w, std::uint64_t scale) {
    if (w.is_infinite()) return "inf";
    std::uint64_t g = std::gcd(w.value(), scale);
    if (scale / g == 1) return std::to_string(w.value() / g);
    return std::to_string(w.value() / g) + "/" + std::to_string(scale / g);
}

inline void write_stp(std::ostream& out, const Instance& inst) {
    const Graph& g = inst.graph;
    out << "33D32945 STP File, STP Format Version 1.0\n\n";
    out << "SECTION Comment\nName \"" << inst.name << "\"\nEND\n\n";
    out << "SECTION Graph\nNodes " << g.vertex_count() << "\nEdges " << g.edge_count() << "\n";
    for (const Edge& e : g.edges()) out << "E " << e.u + 1 << " " << e.v + 1 << " " << format_weight(e.w, g.scale()) << "\n";
    out << "END\n\n";
    out << "SECTION Terminals\nTerminals " << inst.terminals.size() << "\n";
    for (VertexId t : inst.terminals) out << "T " << t + 1 << "\n";
    out << "END\n\nEOF\n";
}

}  // namespace steiner
