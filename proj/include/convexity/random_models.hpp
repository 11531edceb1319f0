#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "convexity/geodesic.hpp"
#include "convexity/graph.hpp"
#include "convexity/graphlets.hpp"
#include "convexity/rng.hpp"

namespace convexity {

namespace detail {

inline Graph graph_from_edges(NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges,
                              std::vector<Label> labels) {
    std::vector<NodeId> deg(n, 0);
    for (const auto& [u, v] : edges) {
        ++deg[u];
        ++deg[v];
    }
    std::vector<NodeId> offsets(n + 1, 0);
    for (NodeId i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + deg[i];
    std::vector<NodeId> targets(offsets[n]);
    std::vector<NodeId> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& [u, v] : edges) {
        targets[cursor[u]++] = v;
        targets[cursor[v]++] = u;
    }
    for (NodeId i = 0; i < n; ++i)
        std::sort(targets.begin() + offsets[i], targets.begin() + offsets[i + 1]);
    if (labels.empty()) {
        labels.resize(n);
        for (NodeId i = 0; i < n; ++i) labels[i] = i;
    }
    return Graph(n, std::move(offsets), std::move(targets), std::move(labels));
}

inline bool edges_connected(NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
    std::vector<NodeId> parent(n);
    for (NodeId i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](NodeId x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    NodeId comps = n;
    for (const auto& [u, v] : edges) {
        NodeId a = find(u), b = find(v);
        if (a != b) {
            parent[a] = b;
            --comps;
        }
    }
    return comps == 1;
}

inline std::uint64_t edge_key(NodeId u, NodeId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

} // namespace detail

/// Uniform simple graph with exactly n nodes and m edges, conditioned on
/// connectivity by rejection. Throws once the attempt cap is exceeded, which
/// protects against parameters far below the connectivity threshold.
inline Graph gen_er_connected(NodeId n, long long m, Rng& rng, int max_attempts = 10000) {
    if (n < 2) throw std::invalid_argument("need at least two nodes");
    long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
    if (m < n - 1 || m > max_edges)
        throw std::invalid_argument("edge count outside connectable range");

    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(static_cast<std::size_t>(m) * 2);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        edges.clear();
        seen.clear();
        while (static_cast<long long>(edges.size()) < m) {
            NodeId u = static_cast<NodeId>(rng.below(n));
            NodeId v = static_cast<NodeId>(rng.below(n));
            if (u == v) continue;
            if (!seen.insert(detail::edge_key(u, v)).second) continue;
            edges.emplace_back(u, v);
        }
        if (detail::edges_connected(n, edges)) return detail::graph_from_edges(n, edges, {});
    }
    throw std::runtime_error("connectivity rejection cap");
}

/// Bernoulli edge graph G(n, p) conditioned on connectivity by rejection.
inline Graph gen_gnp_connected(NodeId n, double p, Rng& rng, int max_attempts = 10000) {
    if (n < 2) throw std::invalid_argument("need at least two nodes");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must be in (0, 1)");
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        edges.clear();
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v = u + 1; v < n; ++v)
                if (rng.bernoulli(p)) edges.emplace_back(u, v);
        if (detail::edges_connected(n, edges)) return detail::graph_from_edges(n, edges, {});
    }
    throw std::runtime_error("connectivity rejection cap");
}

/// Degree-preserving randomization by double-edge swaps. Swaps that would
/// introduce a self-loop or parallel edge, or disconnect the graph, are
/// rejected; every proposal counts as one step. Default step budget is 10m.
inline Graph rewire_preserving_degrees(const Graph& g, Rng& rng, long long steps = 0) {
    if (!is_connected(g)) throw std::invalid_argument("rewiring requires a connected graph");
    NodeId n = g.node_count();
    long long m = g.edge_count();
    if (steps <= 0) steps = 10 * m;
    if (m < 2) return g;

    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    std::unordered_set<std::uint64_t> present;
    present.reserve(static_cast<std::size_t>(m) * 2);
    std::vector<std::vector<NodeId>> adj(n);
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v : g.neighbors(u))
            if (u < v) {
                edges.emplace_back(u, v);
                present.insert(detail::edge_key(u, v));
                adj[u].push_back(v);
                adj[v].push_back(u);
            }

    auto drop_adj = [&](NodeId u, NodeId v) {
        auto& a = adj[u];
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] == v) {
                a[i] = a.back();
                a.pop_back();
                return;
            }
    };
    auto reachable = [&](NodeId from, NodeId to) {
        // early-exit BFS; the swap only rewires around four nodes, so the
        // target is usually found quickly
        std::vector<std::uint8_t> seen(n, 0);
        std::vector<NodeId> frontier{from};
        seen[from] = 1;
        while (!frontier.empty()) {
            std::vector<NodeId> next;
            for (NodeId x : frontier)
                for (NodeId w : adj[x]) {
                    if (w == to) return true;
                    if (!seen[w]) {
                        seen[w] = 1;
                        next.push_back(w);
                    }
                }
            frontier = std::move(next);
        }
        return false;
    };

    for (long long step = 0; step < steps; ++step) {
        std::size_t i = static_cast<std::size_t>(rng.below(edges.size()));
        std::size_t j = static_cast<std::size_t>(rng.below(edges.size()));
        if (i == j) continue;
        auto [a, b] = edges[i];
        auto [c, d] = edges[j];
        if (rng.bernoulli(0.5)) std::swap(c, d);
        // proposed replacement: (a,b),(c,d) -> (a,d),(c,b)
        if (a == c || a == d || b == c || b == d) continue;
        if (present.count(detail::edge_key(a, d)) || present.count(detail::edge_key(c, b)))
            continue;
        present.erase(detail::edge_key(a, b));
        present.erase(detail::edge_key(c, d));
        present.insert(detail::edge_key(a, d));
        present.insert(detail::edge_key(c, b));
        drop_adj(a, b);
        drop_adj(b, a);
        drop_adj(c, d);
        drop_adj(d, c);
        adj[a].push_back(d);
        adj[d].push_back(a);
        adj[c].push_back(b);
        adj[b].push_back(c);
        // connectivity holds iff b is still reachable from a: any old path
        // through (a,b) or (c,d) can be rerouted over the two new edges
        if (reachable(a, b)) {
            edges[i] = {a, d};
            edges[j] = {c, b};
        } else {
            present.erase(detail::edge_key(a, d));
            present.erase(detail::edge_key(c, b));
            present.insert(detail::edge_key(a, b));
            present.insert(detail::edge_key(c, d));
            drop_adj(a, d);
            drop_adj(d, a);
            drop_adj(c, b);
            drop_adj(b, c);
            adj[a].push_back(b);
            adj[b].push_back(a);
            adj[c].push_back(d);
            adj[d].push_back(c);
        }
    }
    return detail::graph_from_edges(n, edges, g.labels());
}

/// Closed-form convexity priors for the nine classes in an Erdos-Renyi
/// graph with edge probability p. The path class uses the mean-field
/// closure over external two-step connections; see
/// prior_path_convexity_exact for the exact expectation.
inline std::array<double, 9> prior_graphlet_convexity(long long n, double p) {
    if (n < 5) throw std::invalid_argument("n must be at least 5");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must be in (0, 1)");
    std::array<double, 9> P{};
    double q = 1.0 - p;
    P[0] = P[2] = P[8] = 1.0;
    P[1] = std::pow(1.0 - p * p, static_cast<double>(n - 3));
    P[4] = std::pow(1.0 - 3 * p * p + 2 * p * p * p, static_cast<double>(n - 4));
    P[5] = std::pow(1.0 - 2 * p * p + p * p * p * p, static_cast<double>(n - 4));
    P[6] = std::pow(1.0 - 2 * p * p + p * p * p, static_cast<double>(n - 4));
    P[7] = std::pow(1.0 - p * p, static_cast<double>(n - 4));
    double c = p * static_cast<double>(n - 4);
    P[3] = std::pow(1.0 - 3 * p * p + 2 * p * p * p, static_cast<double>(n - 4)) *
           std::pow(q, c * c);
    return P;
}

/// Exact convexity prior of the 4-node path: the closure factor is the true
/// expectation of (1-p)^(XY) over the joint count of external neighbors of
/// the two endpoints, not its mean-field approximation.
inline double prior_path_convexity_exact(long long n, double p) {
    if (n < 5) throw std::invalid_argument("n must be at least 5");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must be in (0, 1)");
    long long m = n - 4;
    double q = 1.0 - p;
    double base = 1.0 - 3 * p * p + 2 * p * p * p;
    double q1 = p * q * q / base;       // P(external node is an endpoint-1 neighbor | allowed)
    double q4 = q1 / (1.0 - q1);        // same for the other endpoint, conditioned on not both
    double term = std::pow(1.0 - q1, static_cast<double>(m)); // Binomial(m, q1) at x = 0
    double qp_x = 1.0;                                        // (1-p)^x
    double expectation = 0.0;
    for (long long x = 0; x <= m; ++x) {
        expectation += term * std::pow(1.0 - q4 * (1.0 - qp_x), static_cast<double>(m - x));
        term *= static_cast<double>(m - x) / static_cast<double>(x + 1) * q1 / (1.0 - q1);
        qp_x *= q;
        if (term < 1e-320) break;
    }
    return std::pow(base, static_cast<double>(m)) * expectation;
}

/// Expected numbers of induced instances per class in G(n, p):
/// C(n, s_i) * a_i * p^e_i * (1-p)^(C(s_i,2) - e_i).
inline std::array<double, 9> expected_graphlet_counts(long long n, double p) {
    if (n < 4) throw std::invalid_argument("n must be at least 4");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must be in [0, 1]");
    auto choose = [](long long nn, int k) {
        double r = 1.0;
        for (int i = 0; i < k; ++i) r *= static_cast<double>(nn - i) / (i + 1);
        return r;
    };
    std::array<double, 9> g{};
    for (int i = 0; i < 9; ++i) {
        const auto& cls = kGraphletClasses[i];
        int pairs = cls.size * (cls.size - 1) / 2;
        g[i] = choose(n, cls.size) * cls.labeled_copies * std::pow(p, cls.edges) *
               std::pow(1.0 - p, pairs - cls.edges);
    }
    return g;
}

/// Probability that a random induced subgraph (classes 1..8, the bare edge
/// excluded as trivial) of G(n, <k>/(n-1)) is convex:
/// sum g~_i P~_i / sum g~_i.
inline double prior_overall(long long n, double avg_degree) {
    if (n < 5) throw std::invalid_argument("n must be at least 5");
    if (!(avg_degree > 0.0 && avg_degree < static_cast<double>(n - 1)))
        throw std::invalid_argument("average degree out of range");
    double p = avg_degree / static_cast<double>(n - 1);
    auto P = prior_graphlet_convexity(n, p);
    auto g = expected_graphlet_counts(n, p);
    double num = 0, den = 0;
    for (int i = 1; i < 9; ++i) {
        num += g[i] * P[i];
        den += g[i];
    }
    return num / den;
}

/// ln n / ln <k>: connected subsets up to this size are almost certainly
/// convex in a random graph.
inline double local_convexity_threshold(long long n, double avg_degree) {
    if (avg_degree <= 1.0) throw std::invalid_argument("average degree must exceed 1");
    return std::log(static_cast<double>(n)) / std::log(avg_degree);
}

/// Root s of <k>^sqrt(s) * s(s-1)/2 = n; the size at which random-graph
/// expansion takes off. The left side is strictly increasing, so bisection
/// on [2, n] suffices.
inline double expansion_threshold(long long n, double avg_degree) {
    if (!(avg_degree > 1.0) || static_cast<double>(n) <= avg_degree)
        throw std::invalid_argument("requires n > <k> > 1");
    auto f = [&](double s) {
        return std::pow(avg_degree, std::sqrt(s)) * s * (s - 1.0) / 2.0 -
               static_cast<double>(n);
    };
    double lo = 2.0, hi = static_cast<double>(n);
    if (f(lo) > 0.0) throw std::runtime_error("no expansion threshold in range: n too small");
    for (int it = 0; it < 200 && hi - lo > 1e-9; ++it) {
        double mid = 0.5 * (lo + hi);
        (f(mid) <= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct SampledConvexity {
    long long samples = 0;  // connected subsets kept
    long long convex = 0;
    double fraction = 0;
    double standard_error = 0; // binomial
    long long attempts = 0;
};

/// Uniform random node subsets of a fixed size, keeping the ones that
/// induce a connected subgraph and reporting the convex share among them.
inline SampledConvexity sample_connected_induced(const Graph& g, int size, long long samples,
                                                 Rng& rng, long long max_attempts = 0) {
    NodeId n = g.node_count();
    if (size < 2 || size > n) throw std::invalid_argument("subset size out of range");
    if (samples < 1) throw std::invalid_argument("samples must be positive");
    if (max_attempts <= 0) max_attempts = samples * 1000;

    std::vector<NodeId> pool(n);
    for (NodeId i = 0; i < n; ++i) pool[i] = i;

    SampledConvexity out;
    while (out.samples < samples && out.attempts < max_attempts) {
        ++out.attempts;
        for (int i = 0; i < size; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
            std::swap(pool[i], pool[j]);
        }
        NodeSet s(n);
        for (int i = 0; i < size; ++i) s.add(pool[i]);
        if (!detail::induced_connected(g, s)) continue;
        ++out.samples;
        if (is_convex(g, s)) ++out.convex;
    }
    if (out.samples == 0) throw std::runtime_error("no connected subsets found within attempt cap");
    out.fraction = static_cast<double>(out.convex) / static_cast<double>(out.samples);
    out.standard_error =
        std::sqrt(out.fraction * (1.0 - out.fraction) / static_cast<double>(out.samples));
    return out;
}

} // namespace convexity
