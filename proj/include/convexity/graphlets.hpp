#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "convexity/geodesic.hpp"
#include "convexity/graph.hpp"
#include "convexity/parallel.hpp"
#include "convexity/rng.hpp"

namespace convexity {

/// The nine connected graphs on 2..4 nodes, in the conventional order:
///   0 edge, 1 path-3, 2 triangle, 3 path-4, 4 star-4, 5 cycle-4,
///   6 triangle-plus-pendant, 7 four-clique-minus-edge, 8 four-clique.
struct GraphletClassInfo {
    int size;
    int edges;
    int labeled_copies; // distinct labeled copies on `size` fixed vertices
    bool clique;        // convex by construction
};

inline constexpr std::array<GraphletClassInfo, 9> kGraphletClasses = {{
    {2, 1, 1, true},
    {3, 2, 3, false},
    {3, 3, 1, true},
    {4, 3, 12, false},
    {4, 3, 4, false},
    {4, 4, 3, false},
    {4, 4, 12, false},
    {4, 5, 6, false},
    {4, 6, 1, true},
}};

/// (size, edge count, max within-subset degree) is a complete invariant for
/// connected graphs on at most four nodes.
inline int classify_graphlet(int size, int edge_count, int max_degree) {
    switch (size) {
    case 2:
        return 0;
    case 3:
        return edge_count == 2 ? 1 : 2;
    case 4:
        switch (edge_count) {
        case 3:
            return max_degree == 3 ? 4 : 3;
        case 4:
            return max_degree == 2 ? 5 : 6;
        case 5:
            return 7;
        default:
            return 8;
        }
    default:
        throw std::invalid_argument("graphlet size out of range");
    }
}

enum class CensusMode { Exact, Sampled };

struct GraphletCensus {
    CensusMode mode = CensusMode::Exact;
    std::array<long long, 9> induced{}; // g_i, exact in both modes
    std::array<long long, 9> convex{};  // c_i; in sampled mode only sizes 2-3 are exact
    long long sample_size = 0;
    std::array<long long, 9> sampled{};        // uniformly sampled 4-node instances
    std::array<long long, 9> sampled_convex{}; // convex among the sampled ones
};

struct CensusOptions {
    CensusMode mode = CensusMode::Exact;
    long long sample_size = 0; // required in sampled mode
    std::uint64_t rng_seed = 0;
    // dense distance table is used when the graph fits; otherwise distances
    // come from per-instance truncated BFS (identical results)
    NodeId matrix_node_limit = 20000;
    std::size_t matrix_byte_budget = std::size_t(1) << 30;
};

namespace detail {

// Truncated BFS rows around one instance; radius 3 suffices because members
// of a connected <=4-node induced subgraph are within host distance 3.
class LocalDistances {
public:
    void reset(const Graph& g, const std::array<NodeId, 4>& nodes, int count) {
        if (dist_[0].size() != static_cast<std::size_t>(g.node_count()))
            for (auto& d : dist_) d.assign(g.node_count(), kUnreachable);
        for (int i = 0; i < count; ++i) {
            auto& d = dist_[i];
            auto& touched = touched_[i];
            for (NodeId w : touched) d[w] = kUnreachable;
            touched.clear();
            NodeId src = nodes[i];
            d[src] = 0;
            touched.push_back(src);
            std::size_t head = 0;
            while (head < touched.size()) {
                NodeId u = touched[head++];
                if (d[u] >= 3) break;
                for (NodeId w : g.neighbors(u))
                    if (d[w] == kUnreachable) {
                        d[w] = d[u] + 1;
                        touched.push_back(w);
                    }
            }
        }
    }

    std::int32_t at(int src_index, NodeId w) const { return dist_[src_index][w]; }

private:
    std::array<std::vector<std::int32_t>, 4> dist_;
    std::array<std::vector<NodeId>, 4> touched_;
};

// Shared convexity test for one instance, parameterized over the distance
// lookup (dense table or truncated BFS).
template <typename DistFn>
bool instance_convex(const Graph& g, const std::array<NodeId, 4>& nodes, int count,
                     const DistFn& dist) {
    auto in_set = [&](NodeId w) {
        for (int i = 0; i < count; ++i)
            if (nodes[i] == w) return true;
        return false;
    };
    for (int i = 0; i < count; ++i)
        for (int j = i + 1; j < count; ++j) {
            NodeId u = nodes[i], v = nodes[j];
            std::int32_t duv = dist(i, v);
            if (duv <= 1) continue;
            // interior geodesic nodes sit in N(u) at distance duv-1 from v,
            // or in N(v) at distance duv-1 from u (duv <= 3 here)
            for (NodeId w : g.neighbors(u))
                if (dist(j, w) == duv - 1 && !in_set(w)) return false;
            for (NodeId w : g.neighbors(v))
                if (dist(i, w) == duv - 1 && !in_set(w)) return false;
        }
    return true;
}

struct InstanceChecker {
    const Graph* g;
    const DistanceMatrix* matrix; // may be null
    LocalDistances local;

    bool convex(const std::array<NodeId, 4>& nodes, int count) {
        if (matrix) {
            auto dist = [&](int i, NodeId w) -> std::int32_t { return matrix->at(nodes[i], w); };
            return instance_convex(*g, nodes, count, dist);
        }
        local.reset(*g, nodes, count);
        auto dist = [&](int i, NodeId w) -> std::int32_t { return local.at(i, w); };
        return instance_convex(*g, nodes, count, dist);
    }
};

// Enumeration tree over connected induced subgraphs: children extend the
// subset with exclusive neighbors larger than the root, so every connected
// subset on 2..4 nodes is emitted exactly once.
template <typename Emit>
class SubgraphEnumerator {
public:
    SubgraphEnumerator(const Graph& g, Emit& emit)
        : g_(g), emit_(emit), seen_(g.node_count(), 0) {}

    void run_root(NodeId root) {
        root_ = root;
        seen_[root] = 1;
        std::vector<NodeId> undo{root};
        nodes_[0] = root;
        count_ = 1;
        std::vector<NodeId> ext;
        for (NodeId w : g_.neighbors(root))
            if (w > root) {
                ext.push_back(w);
                seen_[w] = 1;
                undo.push_back(w);
            }
        extend(ext);
        for (NodeId w : undo) seen_[w] = 0;
    }

private:
    void extend(std::vector<NodeId> ext) {
        while (!ext.empty()) {
            NodeId u = ext.back();
            ext.pop_back();
            nodes_[count_++] = u;
            emit_(nodes_, count_);
            if (count_ < 4) {
                std::vector<NodeId> child = ext;
                std::vector<NodeId> undo;
                for (NodeId w : g_.neighbors(u))
                    if (w > root_ && !seen_[w]) {
                        seen_[w] = 1;
                        undo.push_back(w);
                        child.push_back(w);
                    }
                extend(std::move(child));
                for (NodeId w : undo) seen_[w] = 0;
            }
            --count_;
        }
    }

    const Graph& g_;
    Emit& emit_;
    std::vector<std::uint8_t> seen_;
    std::array<NodeId, 4> nodes_{};
    int count_ = 0;
    NodeId root_ = 0;
};

inline int classify_instance(const Graph& g, const std::array<NodeId, 4>& nodes, int count,
                             int& edge_count_out) {
    int edges = 0;
    int maxdeg = 0;
    for (int i = 0; i < count; ++i) {
        int deg = 0;
        for (int j = 0; j < count; ++j)
            if (j != i && g.has_edge(nodes[i], nodes[j])) ++deg;
        edges += deg;
        maxdeg = std::max(maxdeg, deg);
    }
    edges /= 2;
    edge_count_out = edges;
    return classify_graphlet(count, edges, maxdeg);
}

} // namespace detail

/// Census of connected induced subgraphs on 2..4 nodes with per-instance
/// convexity against the host graph. Exact mode enumerates everything;
/// sampled mode keeps exact counts but estimates 4-node convexity from a
/// uniform reservoir sample of instances.
inline GraphletCensus census(const Graph& g, const CensusOptions& opt = {}) {
    if (!is_connected(g)) throw std::invalid_argument("census requires a connected graph");
    if (opt.mode == CensusMode::Sampled && opt.sample_size <= 0)
        throw std::invalid_argument("sample_size must be positive in sampled mode");

    std::optional<DistanceMatrix> matrix;
    NodeId n = g.node_count();
    std::size_t need = static_cast<std::size_t>(n) * n * sizeof(std::int16_t);
    if (n <= opt.matrix_node_limit && need <= opt.matrix_byte_budget)
        matrix.emplace(DistanceMatrix::build(g));
    const DistanceMatrix* mp = matrix ? &*matrix : nullptr;

    GraphletCensus out;
    out.mode = opt.mode;

    if (opt.mode == CensusMode::Exact) {
        int workers = std::max(1, worker_count());
        std::vector<std::array<long long, 9>> g_acc(workers, std::array<long long, 9>{});
        std::vector<std::array<long long, 9>> c_acc(workers, std::array<long long, 9>{});
        parallel_blocks(n, [&](int w, long long begin, long long end) {
            detail::InstanceChecker checker{&g, mp, {}};
            auto emit = [&](const std::array<NodeId, 4>& nodes, int count) {
                int edges = 0;
                int cls = detail::classify_instance(g, nodes, count, edges);
                ++g_acc[w][cls];
                if (kGraphletClasses[cls].clique || checker.convex(nodes, count)) ++c_acc[w][cls];
            };
            detail::SubgraphEnumerator<decltype(emit)> enumerator(g, emit);
            for (NodeId root = static_cast<NodeId>(begin); root < end; ++root)
                enumerator.run_root(root);
        });
        for (int w = 0; w < workers; ++w)
            for (int i = 0; i < 9; ++i) {
                out.induced[i] += g_acc[w][i];
                out.convex[i] += c_acc[w][i];
            }
        return out;
    }

    // sampled mode: single deterministic pass; sizes 2-3 checked exactly,
    // size-4 instances go through a uniform reservoir
    Rng rng(opt.rng_seed);
    detail::InstanceChecker checker{&g, mp, {}};
    std::vector<std::array<NodeId, 4>> reservoir;
    reservoir.reserve(static_cast<std::size_t>(opt.sample_size));
    long long quad_seen = 0;
    auto emit = [&](const std::array<NodeId, 4>& nodes, int count) {
        int edges = 0;
        int cls = detail::classify_instance(g, nodes, count, edges);
        ++out.induced[cls];
        if (count <= 3) {
            if (kGraphletClasses[cls].clique || checker.convex(nodes, count)) ++out.convex[cls];
            return;
        }
        ++quad_seen;
        if (static_cast<long long>(reservoir.size()) < opt.sample_size) {
            reservoir.push_back(nodes);
        } else {
            long long j = static_cast<long long>(rng.below(static_cast<std::uint64_t>(quad_seen)));
            if (j < opt.sample_size) reservoir[static_cast<std::size_t>(j)] = nodes;
        }
    };
    detail::SubgraphEnumerator<decltype(emit)> enumerator(g, emit);
    for (NodeId root = 0; root < n; ++root) enumerator.run_root(root);

    out.sample_size = static_cast<long long>(reservoir.size());
    for (const auto& nodes : reservoir) {
        int edges = 0;
        int cls = detail::classify_instance(g, nodes, 4, edges);
        ++out.sampled[cls];
        if (kGraphletClasses[cls].clique || checker.convex(nodes, 4)) ++out.sampled_convex[cls];
    }
    for (int i = 3; i < 9; ++i) {
        if (kGraphletClasses[i].clique)
            out.convex[i] = out.induced[i];
        else if (out.sampled[i] > 0)
            out.convex[i] = static_cast<long long>(
                static_cast<double>(out.induced[i]) *
                    (static_cast<double>(out.sampled_convex[i]) / out.sampled[i]) +
                0.5);
    }
    return out;
}

struct ConvexProbabilities {
    std::array<std::optional<double>, 9> per_class{}; // P_i, undefined when g_i = 0
    std::optional<double> overall;                    // classes 1..8; the bare edge is excluded
};

inline ConvexProbabilities convex_probabilities(const GraphletCensus& c) {
    ConvexProbabilities out;
    for (int i = 0; i < 9; ++i) {
        if (c.mode == CensusMode::Sampled && i >= 3 && !kGraphletClasses[i].clique) {
            if (c.sampled[i] > 0)
                out.per_class[i] = static_cast<double>(c.sampled_convex[i]) / c.sampled[i];
        } else if (c.induced[i] > 0) {
            out.per_class[i] = static_cast<double>(c.convex[i]) / c.induced[i];
        }
    }
    long long g_sum = 0;
    double c_sum = 0;
    for (int i = 1; i < 9; ++i) {
        g_sum += c.induced[i];
        if (c.mode == CensusMode::Sampled && i >= 3 && !kGraphletClasses[i].clique)
            c_sum += out.per_class[i] ? *out.per_class[i] * static_cast<double>(c.induced[i]) : 0.0;
        else
            c_sum += static_cast<double>(c.convex[i]);
    }
    if (g_sum > 0) out.overall = c_sum / static_cast<double>(g_sum);
    return out;
}

} // namespace convexity
