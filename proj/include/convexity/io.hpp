#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "convexity/graph.hpp"

namespace convexity {

enum class InputFormat { EdgeList, PajekArcs };

struct IngestResult {
    Graph graph; // largest connected component, simple, undirected
    long long lines_parsed = 0;
    long long selfloops_dropped = 0;
    long long duplicates_dropped = 0;
    long long nodes_before_reduction = 0;
    long long edges_before_reduction = 0;
    long long nodes_dropped = 0;
    long long edges_dropped = 0;

    std::string summary() const {
        std::ostringstream os;
        os << "ingested " << lines_parsed << " edge lines; dropped " << selfloops_dropped
           << " self-loops, " << duplicates_dropped << " duplicates; largest component kept "
           << graph.node_count() << "/" << nodes_before_reduction << " nodes and "
           << graph.edge_count() << "/" << edges_before_reduction << " edges";
        return os.str();
    }
};

namespace detail {

inline bool parse_label(const std::string& token, Label& out) {
    if (token.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stoll(token, &pos);
    } catch (...) {
        return false;
    }
    return pos == token.size() && out >= 0;
}

inline std::vector<std::pair<Label, Label>> parse_edge_list(std::istream& in,
                                                            long long& lines_parsed) {
    std::vector<std::pair<Label, Label>> edges;
    std::string line;
    long long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#' || line[start] == '%') continue;
        for (char& ch : line)
            if (ch == ',' || ch == '\t' || ch == '\r') ch = ' ';
        std::istringstream ls(line);
        std::string a, b, extra;
        ls >> a >> b;
        Label u, v;
        if (!parse_label(a, u) || !parse_label(b, v))
            throw std::runtime_error("cannot parse edge at line " + std::to_string(lineno));
        if (ls >> extra)
            throw std::runtime_error("trailing tokens at line " + std::to_string(lineno));
        edges.emplace_back(u, v);
        ++lines_parsed;
    }
    return edges;
}

inline std::vector<std::pair<Label, Label>> parse_pajek_arcs(std::istream& in,
                                                             long long& lines_parsed) {
    std::vector<std::pair<Label, Label>> edges;
    std::string line;
    long long lineno = 0;
    bool in_links = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '%') continue;
        if (line[start] == '*') {
            std::string section = line.substr(start);
            for (char& ch : section) ch = static_cast<char>(std::tolower(ch));
            in_links = section.rfind("*arcs", 0) == 0 || section.rfind("*edges", 0) == 0;
            continue;
        }
        if (!in_links) continue; // vertex definitions and preamble
        std::istringstream ls(line);
        std::string a, b;
        ls >> a >> b;
        Label u, v;
        if (!parse_label(a, u) || !parse_label(b, v))
            throw std::runtime_error("cannot parse arc at line " + std::to_string(lineno));
        edges.emplace_back(u, v); // arcs treated as undirected, weights ignored
        ++lines_parsed;
    }
    return edges;
}

} // namespace detail

/// Parse an edge file, symmetrize and deduplicate, reduce to the largest
/// connected component. Parse failures carry the offending line number.
inline IngestResult ingest(const std::string& path, InputFormat format = InputFormat::EdgeList) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    IngestResult res;
    auto edges = format == InputFormat::EdgeList
                     ? detail::parse_edge_list(in, res.lines_parsed)
                     : detail::parse_pajek_arcs(in, res.lines_parsed);
    if (edges.empty()) throw std::runtime_error("no edges in input");

    std::set<std::pair<Label, Label>> unique_keys;
    for (const auto& [u, v] : edges) {
        if (u == v) {
            ++res.selfloops_dropped;
            continue;
        }
        if (!unique_keys.emplace(std::min(u, v), std::max(u, v)).second)
            ++res.duplicates_dropped;
    }

    Graph full = build_graph(edges);
    res.nodes_before_reduction = full.node_count();
    res.edges_before_reduction = full.edge_count();
    auto [reduced, mapping] = largest_component(full);
    res.graph = std::move(reduced);
    res.nodes_dropped = res.nodes_before_reduction - res.graph.node_count();
    res.edges_dropped = res.edges_before_reduction - res.graph.edge_count();
    if (res.graph.node_count() == 0) throw std::runtime_error("graph empty after reduction");
    return res;
}

inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    auto s = ss.str();
    return fnv1a64(s);
}

} // namespace convexity
