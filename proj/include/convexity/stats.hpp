#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "convexity/graph.hpp"
#include "convexity/parallel.hpp"

namespace convexity {

/// Basic whole-graph statistics plus the per-node quantities they average.
/// Requires a connected graph (mean distances are otherwise undefined).
struct GraphStats {
    long long n = 0;
    long long m = 0;
    double avg_degree = 0;     // 2m/n
    double avg_clustering = 0; // mean of C_i, C_i = 0 for degree < 2
    double avg_geodesic = 0;   // mean over nodes of mean distance to others
    std::int32_t mu = 0;       // max triangles on any single edge
    std::vector<std::int32_t> degree;
    std::vector<long long> triangles;
    std::vector<double> clustering;
    std::vector<double> corrected_clustering; // 2 t_i / (k_i mu)
    std::vector<double> mean_distance;        // l_i
};

inline GraphStats graph_stats(const Graph& g) {
    if (!is_connected(g)) throw std::invalid_argument("graph_stats requires a connected graph");
    NodeId n = g.node_count();
    GraphStats st;
    st.n = n;
    st.m = g.edge_count();
    st.avg_degree = n > 0 ? 2.0 * static_cast<double>(st.m) / n : 0.0;

    st.degree.resize(n);
    for (NodeId u = 0; u < n; ++u) st.degree[u] = g.degree(u);

    // per-edge triangle counts give mu directly; summing them per endpoint
    // counts each node's triangles twice
    st.triangles.assign(n, 0);
    std::vector<std::uint8_t> mark(n, 0);
    long long mu = 0;
    {
        std::vector<std::pair<NodeId, NodeId>> edges;
        edges.reserve(static_cast<std::size_t>(st.m));
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v : g.neighbors(u))
                if (u < v) edges.emplace_back(u, v);
        for (const auto& [u, v] : edges) {
            for (NodeId w : g.neighbors(u)) mark[w] = 1;
            long long t = 0;
            for (NodeId w : g.neighbors(v))
                if (mark[w]) ++t;
            for (NodeId w : g.neighbors(u)) mark[w] = 0;
            if (t > mu) mu = t;
            st.triangles[u] += t;
            st.triangles[v] += t;
        }
        // each triangle at node i was counted once per incident edge pair,
        // i.e. twice
        for (NodeId u = 0; u < n; ++u) st.triangles[u] /= 2;
    }
    st.mu = static_cast<std::int32_t>(mu);

    st.clustering.assign(n, 0.0);
    st.corrected_clustering.assign(n, 0.0);
    double csum = 0;
    for (NodeId u = 0; u < n; ++u) {
        long long k = st.degree[u];
        if (k >= 2) st.clustering[u] = 2.0 * static_cast<double>(st.triangles[u]) / (static_cast<double>(k) * (k - 1));
        if (k >= 1 && mu > 0)
            st.corrected_clustering[u] = 2.0 * static_cast<double>(st.triangles[u]) / (static_cast<double>(k) * static_cast<double>(mu));
        csum += st.clustering[u];
    }
    st.avg_clustering = n > 0 ? csum / n : 0.0;

    st.mean_distance.assign(n, 0.0);
    parallel_blocks(n, [&](int, long long begin, long long end) {
        for (NodeId u = static_cast<NodeId>(begin); u < end; ++u) {
            auto d = bfs_distances(g, u);
            long long sum = 0;
            for (std::int32_t x : d.dist) sum += x;
            st.mean_distance[u] = n > 1 ? static_cast<double>(sum) / (n - 1) : 0.0;
        }
    });
    double lsum = 0;
    for (double x : st.mean_distance) lsum += x;
    st.avg_geodesic = n > 0 ? lsum / n : 0.0;
    return st;
}

struct CoreNumbers {
    std::vector<std::int32_t> core; // per node
    std::int32_t max_core = 0;
};

/// Standard k-core decomposition by repeated pruning of minimum-degree
/// nodes (bucket ordering, O(n + m)).
inline CoreNumbers k_core(const Graph& g) {
    NodeId n = g.node_count();
    CoreNumbers out;
    out.core.assign(n, 0);
    std::vector<std::int32_t> deg(n);
    std::int32_t maxdeg = 0;
    for (NodeId u = 0; u < n; ++u) {
        deg[u] = g.degree(u);
        maxdeg = std::max(maxdeg, deg[u]);
    }
    std::vector<NodeId> bin(maxdeg + 2, 0);
    for (NodeId u = 0; u < n; ++u) ++bin[deg[u] + 1];
    for (std::int32_t d = 0; d <= maxdeg; ++d) bin[d + 1] += bin[d];
    std::vector<NodeId> order(n), pos(n);
    {
        std::vector<NodeId> cursor(bin.begin(), bin.end() - 1);
        for (NodeId u = 0; u < n; ++u) {
            pos[u] = cursor[deg[u]];
            order[pos[u]] = u;
            ++cursor[deg[u]];
        }
    }
    std::vector<NodeId> start(bin.begin(), bin.end() - 1);
    for (NodeId i = 0; i < n; ++i) {
        NodeId u = order[i];
        out.core[u] = deg[u];
        out.max_core = std::max(out.max_core, deg[u]);
        for (NodeId w : g.neighbors(u)) {
            if (deg[w] <= deg[u]) continue;
            // move w to the front of its degree bucket, then shrink it
            NodeId dw = deg[w];
            NodeId pw = pos[w];
            NodeId pfront = start[dw];
            NodeId front = order[pfront];
            if (front != w) {
                std::swap(order[pw], order[pfront]);
                pos[w] = pfront;
                pos[front] = pw;
            }
            ++start[dw];
            --deg[w];
        }
    }
    return out;
}

} // namespace convexity
