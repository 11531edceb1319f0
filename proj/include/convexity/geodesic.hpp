#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "convexity/graph.hpp"
#include "convexity/parallel.hpp"

namespace convexity {

inline constexpr std::int16_t kUnreachable16 = std::numeric_limits<std::int16_t>::max();

/// Dense all-pairs distance table (int16 entries). Immutable once built and
/// safe to share across threads. Only sensible for graphs that fit the
/// caller's memory budget.
class DistanceMatrix {
public:
    static DistanceMatrix build(const Graph& g) {
        NodeId n = g.node_count();
        if (n > 32000) throw std::invalid_argument("graph too large for dense distance table");
        DistanceMatrix m;
        m.n_ = n;
        m.d_.assign(static_cast<std::size_t>(n) * n, kUnreachable16);
        parallel_blocks(n, [&](int, long long begin, long long end) {
            std::vector<NodeId> frontier, next;
            for (NodeId s = static_cast<NodeId>(begin); s < end; ++s) {
                std::int16_t* row = m.d_.data() + static_cast<std::size_t>(s) * n;
                row[s] = 0;
                frontier.assign(1, s);
                std::int16_t level = 0;
                while (!frontier.empty()) {
                    ++level;
                    next.clear();
                    for (NodeId u : frontier)
                        for (NodeId w : g.neighbors(u))
                            if (row[w] == kUnreachable16) {
                                row[w] = level;
                                next.push_back(w);
                            }
                    frontier.swap(next);
                }
            }
        });
        return m;
    }

    NodeId size() const { return n_; }
    const std::int16_t* row(NodeId u) const { return d_.data() + static_cast<std::size_t>(u) * n_; }
    std::int32_t at(NodeId u, NodeId v) const { return row(u)[v]; }
    std::size_t bytes() const { return d_.size() * sizeof(std::int16_t); }

private:
    NodeId n_ = 0;
    std::vector<std::int16_t> d_;
};

/// Lazy per-source BFS rows. One vector per requested source is kept until
/// the budget (max cached vectors) is hit; beyond that, rows are recomputed
/// into two rotating scratch buffers, so at most the two most recently
/// requested rows stay valid.
class DistanceCache {
public:
    explicit DistanceCache(const Graph& g, std::size_t max_vectors = 0)
        : g_(&g), max_vectors_(max_vectors), rows_(g.node_count()) {}

    const std::int32_t* row(NodeId u) {
        if (rows_[u]) return rows_[u].get();
        if (max_vectors_ == 0 || cached_ < max_vectors_) {
            rows_[u] = std::make_unique<std::int32_t[]>(g_->node_count());
            fill(u, rows_[u].get());
            ++cached_;
            return rows_[u].get();
        }
        auto& scratch = scratch_[turn_];
        turn_ ^= 1;
        scratch.assign(g_->node_count(), kUnreachable);
        fill(u, scratch.data());
        return scratch.data();
    }

private:
    void fill(NodeId s, std::int32_t* row) {
        std::fill(row, row + g_->node_count(), kUnreachable);
        row[s] = 0;
        std::vector<NodeId> frontier{s}, next;
        std::int32_t level = 0;
        while (!frontier.empty()) {
            ++level;
            next.clear();
            for (NodeId u : frontier)
                for (NodeId w : g_->neighbors(u))
                    if (row[w] == kUnreachable) {
                        row[w] = level;
                        next.push_back(w);
                    }
            frontier.swap(next);
        }
    }

    const Graph* g_;
    std::size_t max_vectors_;
    std::vector<std::unique_ptr<std::int32_t[]>> rows_;
    std::size_t cached_ = 0;
    std::array<std::vector<std::int32_t>, 2> scratch_;
    int turn_ = 0;
};

/// All nodes lying on at least one geodesic between u and v (inclusive):
/// {w : d(u,w) + d(w,v) = d(u,v)}.
inline NodeSet geodesic_interval(const Graph& g, NodeId u, NodeId v) {
    auto du = bfs_distances(g, u);
    if (du.dist[v] == kUnreachable) throw std::runtime_error("unreachable pair");
    NodeSet out(g.node_count());
    if (u == v) {
        out.add(u);
        return out;
    }
    auto dv = bfs_distances(g, v);
    std::int32_t duv = du.dist[v];
    for (NodeId w = 0; w < g.node_count(); ++w)
        if (du.dist[w] != kUnreachable && dv.dist[w] != kUnreachable &&
            du.dist[w] + dv.dist[w] == duv)
            out.add(w);
    return out;
}

namespace detail {

// Interval closure with a worklist of fresh nodes. Pairs with at least one
// fresh endpoint are scanned; pairs inside the original convex part never
// need rechecking because intervals are fixed by the host graph. Returns
// all nodes added by the call. The result is the unique least superset of
// `hull` closed under geodesic intervals, independent of processing order.
template <typename Provider>
std::vector<NodeId> interval_closure(const Graph& g, Provider& dist, NodeSet& hull,
                                     std::vector<NodeId> worklist) {
    NodeId n = g.node_count();
    std::vector<NodeId> outside;
    outside.reserve(n - hull.size());
    std::vector<NodeId> pos(n, -1);
    for (NodeId w = 0; w < n; ++w)
        if (!hull.contains(w)) {
            pos[w] = static_cast<NodeId>(outside.size());
            outside.push_back(w);
        }
    auto remove_outside = [&](NodeId w) {
        NodeId p = pos[w];
        NodeId last = outside.back();
        outside[p] = last;
        pos[last] = p;
        outside.pop_back();
        pos[w] = -1;
    };

    std::vector<NodeId> added;
    std::vector<NodeId> found;
    while (!worklist.empty() && !outside.empty()) {
        NodeId a = worklist.back();
        worklist.pop_back();
        // hull.members() grows during the scan; index loop keeps it valid
        for (std::size_t bi = 0; bi < hull.members().size(); ++bi) {
            NodeId b = hull.members()[bi];
            if (b == a) continue;
            // refetch per pair: a capped provider keeps only the two most
            // recent rows alive
            const auto* da = dist.row(a);
            std::int32_t dab = da[b];
            if (dab <= 1) continue; // adjacent or same: interval is the endpoints
            const auto* db = dist.row(b);
            found.clear();
            for (NodeId w : outside)
                if (da[w] + db[w] == dab) found.push_back(w);
            for (NodeId w : found) {
                hull.add(w);
                remove_outside(w);
                worklist.push_back(w);
                added.push_back(w);
            }
            if (outside.empty()) break;
        }
    }
    return added;
}

// BFS restricted to the induced subgraph on `s`. Returns distances indexed
// by position in s.members(); kUnreachable marks nodes in other pieces.
inline std::vector<std::int32_t> bfs_within(const Graph& g, const NodeSet& s, NodeId source) {
    std::vector<std::int32_t> dist(g.node_count(), kUnreachable);
    dist[source] = 0;
    std::vector<NodeId> frontier{source}, next;
    std::int32_t level = 0;
    while (!frontier.empty()) {
        ++level;
        next.clear();
        for (NodeId u : frontier)
            for (NodeId w : g.neighbors(u))
                if (s.contains(w) && dist[w] == kUnreachable) {
                    dist[w] = level;
                    next.push_back(w);
                }
        frontier.swap(next);
    }
    std::vector<std::int32_t> out;
    out.reserve(s.size());
    for (NodeId v : s.members()) out.push_back(dist[v]);
    return out;
}

inline bool induced_connected(const Graph& g, const NodeSet& s) {
    if (s.empty()) return false;
    auto d = bfs_within(g, s, s.members().front());
    return std::none_of(d.begin(), d.end(), [](std::int32_t x) { return x == kUnreachable; });
}

} // namespace detail

/// True iff every geodesic between members of s stays inside s. The induced
/// subgraph must be connected; disconnected subsets are rejected, not
/// declared non-convex.
inline bool is_convex(const Graph& g, const NodeSet& s) {
    if (s.empty()) throw std::invalid_argument("empty subset");
    if (!detail::induced_connected(g, s)) throw std::invalid_argument("not a connected subset");
    DistanceCache dist(g);
    const auto& mem = s.members();
    for (std::size_t i = 0; i < mem.size(); ++i) {
        const auto* di = dist.row(mem[i]);
        for (std::size_t j = i + 1; j < mem.size(); ++j) {
            std::int32_t dij = di[mem[j]];
            if (dij <= 1) continue;
            const auto* dj = dist.row(mem[j]);
            for (NodeId w = 0; w < g.node_count(); ++w)
                if (!s.contains(w) && di[w] + dj[w] == dij) return false;
        }
    }
    return true;
}

/// Smallest convex superset of s. s must lie within one component.
/// cache_budget limits the number of BFS rows kept alive (0 = unlimited);
/// a tight budget trades recomputation for memory.
inline NodeSet convex_hull(const Graph& g, const NodeSet& s, std::size_t cache_budget = 0) {
    if (s.empty()) throw std::invalid_argument("empty subset");
    DistanceCache dist(g, cache_budget);
    const auto* d0 = dist.row(s.members().front());
    for (NodeId v : s.members())
        if (d0[v] == kUnreachable) throw std::runtime_error("subset spans multiple components");
    NodeSet hull(g.node_count());
    for (NodeId v : s.members()) hull.add(v);
    detail::interval_closure(g, dist, hull, hull.members());
    return hull;
}

/// Maximum pairwise distance measured inside the induced subgraph.
inline std::int32_t induced_diameter(const Graph& g, const NodeSet& s) {
    if (s.empty()) throw std::invalid_argument("empty subset");
    std::int32_t best = 0;
    for (NodeId v : s.members()) {
        auto d = detail::bfs_within(g, s, v);
        for (std::int32_t x : d) {
            if (x == kUnreachable) throw std::invalid_argument("induced subgraph is disconnected");
            best = std::max(best, x);
        }
    }
    return best;
}

/// Exact minimum size of a set whose convex hull covers the whole graph.
/// Subset search in increasing size order; exponential, hence the limit.
inline int hull_number_bruteforce(const Graph& g, int node_limit = 16) {
    NodeId n = g.node_count();
    if (n > node_limit) throw std::runtime_error("graph too large for exact hull number");
    if (n == 1) return 1;
    DistanceCache dist(g);
    for (int k = 1; k <= n; ++k) {
        std::vector<NodeId> pick(k);
        for (int i = 0; i < k; ++i) pick[i] = i;
        for (;;) {
            NodeSet hull(n);
            for (NodeId v : pick) hull.add(v);
            detail::interval_closure(g, dist, hull, hull.members());
            if (hull.size() == n) return k;
            int i = k - 1;
            while (i >= 0 && pick[i] == n - k + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return n;
}

} // namespace convexity
