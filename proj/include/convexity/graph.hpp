#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace convexity {

using NodeId = std::int32_t;
using Label = std::int64_t;

inline constexpr std::int32_t kUnreachable = std::numeric_limits<std::int32_t>::max();

/// Immutable simple undirected graph in compressed adjacency form.
/// Node ids are compacted to [0, n); neighbor lists are sorted ascending.
/// Original input labels are kept for reporting.
class Graph {
public:
    Graph() = default;

    Graph(NodeId n, std::vector<NodeId> offsets, std::vector<NodeId> targets,
          std::vector<Label> labels)
        : n_(n), offsets_(std::move(offsets)), targets_(std::move(targets)),
          labels_(std::move(labels)) {}

    NodeId node_count() const { return n_; }
    long long edge_count() const { return static_cast<long long>(targets_.size()) / 2; }

    std::span<const NodeId> neighbors(NodeId u) const {
        return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
    }

    NodeId degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

    bool has_edge(NodeId u, NodeId v) const {
        auto nb = neighbors(u);
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    /// Original label of a compacted node id.
    Label label(NodeId u) const { return labels_[u]; }
    const std::vector<Label>& labels() const { return labels_; }

private:
    NodeId n_ = 0;
    std::vector<NodeId> offsets_{0};
    std::vector<NodeId> targets_;
    std::vector<Label> labels_;
};

/// Node subset with O(1) membership against a fixed universe [0, n).
class NodeSet {
public:
    NodeSet() = default;
    explicit NodeSet(NodeId universe) : in_(universe, 0) {}

    NodeSet(NodeId universe, std::initializer_list<NodeId> nodes) : in_(universe, 0) {
        for (NodeId v : nodes) add(v);
    }

    NodeId universe_size() const { return static_cast<NodeId>(in_.size()); }
    NodeId size() const { return static_cast<NodeId>(members_.size()); }
    bool empty() const { return members_.empty(); }
    bool contains(NodeId v) const { return in_[v] != 0; }

    bool add(NodeId v) {
        if (in_[v]) return false;
        in_[v] = 1;
        members_.push_back(v);
        return true;
    }

    const std::vector<NodeId>& members() const { return members_; }

    std::vector<NodeId> sorted_members() const {
        std::vector<NodeId> out = members_;
        std::sort(out.begin(), out.end());
        return out;
    }

    bool operator==(const NodeSet& other) const {
        return in_.size() == other.in_.size() && sorted_members() == other.sorted_members();
    }

private:
    std::vector<std::uint8_t> in_;
    std::vector<NodeId> members_;
};

struct DistanceVector {
    NodeId source = 0;
    std::vector<std::int32_t> dist;
};

/// Build a graph from raw labeled edges. Self-loops are dropped, duplicate
/// and reversed-duplicate edges merged, labels compacted in ascending order.
inline Graph build_graph(std::span<const std::pair<Label, Label>> edges) {
    if (edges.empty()) throw std::invalid_argument("empty graph");

    std::vector<Label> labels;
    labels.reserve(edges.size() * 2);
    for (const auto& [a, b] : edges) {
        if (a < 0 || b < 0) throw std::invalid_argument("negative node id");
        labels.push_back(a);
        labels.push_back(b);
    }
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

    auto index_of = [&labels](Label x) {
        return static_cast<NodeId>(std::lower_bound(labels.begin(), labels.end(), x) - labels.begin());
    };

    std::vector<std::pair<NodeId, NodeId>> compact;
    compact.reserve(edges.size());
    for (const auto& [a, b] : edges) {
        if (a == b) continue;
        NodeId u = index_of(a), v = index_of(b);
        compact.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(compact.begin(), compact.end());
    compact.erase(std::unique(compact.begin(), compact.end()), compact.end());

    NodeId n = static_cast<NodeId>(labels.size());
    std::vector<NodeId> deg(n, 0);
    for (const auto& [u, v] : compact) {
        ++deg[u];
        ++deg[v];
    }
    std::vector<NodeId> offsets(n + 1, 0);
    for (NodeId i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + deg[i];
    std::vector<NodeId> targets(offsets[n]);
    std::vector<NodeId> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& [u, v] : compact) {
        targets[cursor[u]++] = v;
        targets[cursor[v]++] = u;
    }
    // insertion order is sorted already because edges were sorted by (u, v),
    // but v-side entries arrive out of order
    for (NodeId i = 0; i < n; ++i)
        std::sort(targets.begin() + offsets[i], targets.begin() + offsets[i + 1]);

    return Graph(n, std::move(offsets), std::move(targets), std::move(labels));
}

inline Graph build_graph(const std::vector<std::pair<Label, Label>>& edges) {
    return build_graph(std::span<const std::pair<Label, Label>>(edges));
}

inline DistanceVector bfs_distances(const Graph& g, NodeId source) {
    if (source < 0 || source >= g.node_count()) throw std::invalid_argument("invalid source node");
    DistanceVector out;
    out.source = source;
    out.dist.assign(g.node_count(), kUnreachable);
    out.dist[source] = 0;
    std::vector<NodeId> frontier{source}, next;
    std::int32_t level = 0;
    while (!frontier.empty()) {
        ++level;
        next.clear();
        for (NodeId u : frontier)
            for (NodeId w : g.neighbors(u))
                if (out.dist[w] == kUnreachable) {
                    out.dist[w] = level;
                    next.push_back(w);
                }
        frontier.swap(next);
    }
    return out;
}

inline bool is_connected(const Graph& g) {
    if (g.node_count() == 0) return false;
    auto d = bfs_distances(g, 0);
    return std::none_of(d.dist.begin(), d.dist.end(),
                        [](std::int32_t x) { return x == kUnreachable; });
}

/// Restriction to the largest connected component, ties broken by the
/// smallest contained original label. Second result maps old node ids to
/// new ones (-1 for dropped nodes).
inline std::pair<Graph, std::vector<NodeId>> largest_component(const Graph& g) {
    NodeId n = g.node_count();
    std::vector<NodeId> comp(n, -1);
    NodeId comp_count = 0;
    std::vector<long long> comp_size;
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < n; ++s) {
        if (comp[s] != -1) continue;
        comp[s] = comp_count;
        long long size = 0;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            ++size;
            for (NodeId w : g.neighbors(u))
                if (comp[w] == -1) {
                    comp[w] = comp_count;
                    stack.push_back(w);
                }
        }
        comp_size.push_back(size);
        ++comp_count;
    }

    // node ids ascend with original labels, so the first node of the best
    // component carries its smallest label
    NodeId best = 0;
    std::vector<NodeId> first_node(comp_count, -1);
    for (NodeId u = 0; u < n; ++u)
        if (first_node[comp[u]] == -1) first_node[comp[u]] = u;
    for (NodeId c = 1; c < comp_count; ++c) {
        if (comp_size[c] > comp_size[best] ||
            (comp_size[c] == comp_size[best] && first_node[c] < first_node[best]))
            best = c;
    }

    std::vector<NodeId> old_to_new(n, -1);
    std::vector<Label> labels;
    NodeId next_id = 0;
    for (NodeId u = 0; u < n; ++u)
        if (comp[u] == best) {
            old_to_new[u] = next_id++;
            labels.push_back(g.label(u));
        }

    std::vector<NodeId> offsets{0};
    std::vector<NodeId> targets;
    for (NodeId u = 0; u < n; ++u) {
        if (comp[u] != best) continue;
        for (NodeId w : g.neighbors(u)) targets.push_back(old_to_new[w]);
        offsets.push_back(static_cast<NodeId>(targets.size()));
    }
    return {Graph(next_id, std::move(offsets), std::move(targets), std::move(labels)),
            std::move(old_to_new)};
}

} // namespace convexity
