#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "convexity/geodesic.hpp"
#include "convexity/graph.hpp"
#include "convexity/parallel.hpp"
#include "convexity/rng.hpp"

namespace convexity {

enum class SeedMode { UniformRandom, MostCentral };

struct ExpansionConfig {
    int runs = 100;
    int max_steps = 0; // 0 means n - 1, which always suffices to cover
    SeedMode seed_mode = SeedMode::UniformRandom;
    std::uint64_t rng_seed = 0;
    int record_membership_at = 15;
    // dense distance table is shared across runs when it fits this budget
    std::size_t distance_matrix_budget = std::size_t(256) << 20;
};

/// One run of randomized convex growth: a seed node, then repeatedly a
/// boundary node drawn with probability proportional to its edge count into
/// the set, followed by closure to the convex hull. Sizes are kept as
/// integer node counts so that downstream arithmetic can be exact.
struct ExpansionTrace {
    NodeId node_count = 0;
    std::vector<NodeId> sizes;            // per step t = 0, 1, ...
    std::vector<std::int32_t> diameters;  // induced diameter per step
    int covered_at = -1;                  // first t with full coverage, -1 if never
    NodeSet membership_at_checkpoint;

    int steps() const { return static_cast<int>(sizes.size()) - 1; }
    bool covered() const { return covered_at >= 0; }
    double s(int t) const { return static_cast<double>(sizes[t]) / node_count; }
};

struct MembershipFrequency {
    std::vector<double> fraction; // per node: share of runs containing it at checkpoint
};

struct AggregatedCurve {
    std::vector<double> mean_s, lo_s, hi_s;
    std::vector<double> mean_d, lo_d, hi_d;
    std::vector<int> runs_at;
};

namespace detail {

// Fenwick tree over per-node weights; supports total, point update and
// sampling by prefix sum.
class WeightIndex {
public:
    explicit WeightIndex(NodeId n) : n_(n), tree_(n + 1, 0), weight_(n, 0) {}

    long long total() const { return total_; }
    long long weight(NodeId i) const { return weight_[i]; }

    void add(NodeId i, long long delta) {
        weight_[i] += delta;
        total_ += delta;
        for (NodeId x = i + 1; x <= n_; x += x & -x) tree_[x] += delta;
    }

    void clear(NodeId i) {
        if (weight_[i] != 0) add(i, -weight_[i]);
    }

    // smallest node whose cumulative weight exceeds target, target in [0, total)
    NodeId pick(long long target) const {
        NodeId idx = 0;
        NodeId mask = 1;
        while ((mask << 1) <= n_) mask <<= 1;
        for (; mask > 0; mask >>= 1) {
            NodeId next = idx + mask;
            if (next <= n_ && tree_[next] <= target) {
                idx = next;
                target -= tree_[next];
            }
        }
        return idx; // 0-based node id
    }

private:
    NodeId n_;
    std::vector<long long> tree_;
    std::vector<long long> weight_;
    long long total_ = 0;
};

struct MatrixProvider {
    const DistanceMatrix* m;
    const std::int16_t* row(NodeId u) { return m->row(u); }
};

template <typename Provider>
ExpansionTrace expand_once_impl(const Graph& g, const ExpansionConfig& cfg, Rng& rng,
                                Provider& dist, NodeId forced_seed) {
    NodeId n = g.node_count();
    if (n < 2) throw std::invalid_argument("expansion requires at least two nodes");
    int max_steps = cfg.max_steps > 0 ? cfg.max_steps : n - 1;

    ExpansionTrace trace;
    trace.node_count = n;
    NodeSet grown(n);
    WeightIndex boundary(n);

    auto absorb = [&](NodeId x) {
        boundary.clear(x);
        for (NodeId w : g.neighbors(x))
            if (!grown.contains(w)) boundary.add(w, 1);
    };

    NodeId seed = forced_seed >= 0 ? forced_seed : static_cast<NodeId>(rng.below(n));
    grown.add(seed);
    absorb(seed);
    trace.sizes.push_back(1);
    trace.diameters.push_back(0);
    std::int32_t diam = 0;

    bool checkpoint_done = false;
    if (cfg.record_membership_at == 0) {
        trace.membership_at_checkpoint = grown;
        checkpoint_done = true;
    }

    std::vector<NodeId> fresh;
    for (int t = 1; grown.size() < n && t <= max_steps; ++t) {
        if (boundary.total() == 0) throw std::invalid_argument("graph is not connected");
        NodeId next = boundary.pick(static_cast<long long>(rng.below(boundary.total())));
        grown.add(next);
        absorb(next);
        fresh.assign(1, next);
        auto added = interval_closure(g, dist, grown, fresh);
        for (NodeId x : added) absorb(x);

        // the grown set is convex, hence isometric: induced distances equal
        // host-graph distances, so the diameter updates from cached rows
        added.push_back(next);
        for (NodeId x : added) {
            const auto* dx = dist.row(x);
            for (NodeId b : grown.members())
                if (dx[b] > diam) diam = dx[b];
        }

        trace.sizes.push_back(grown.size());
        trace.diameters.push_back(diam);
        if (grown.size() == n && trace.covered_at < 0) trace.covered_at = t;
        if (!checkpoint_done && t == cfg.record_membership_at) {
            trace.membership_at_checkpoint = grown;
            checkpoint_done = true;
        }
    }
    if (!checkpoint_done) trace.membership_at_checkpoint = grown;
    return trace;
}

} // namespace detail

/// Node minimizing the mean geodesic distance to all others; ties broken by
/// smallest id.
inline NodeId most_central_node(const Graph& g) {
    NodeId n = g.node_count();
    std::vector<long long> sum(n, 0);
    parallel_blocks(n, [&](int, long long begin, long long end) {
        for (NodeId u = static_cast<NodeId>(begin); u < end; ++u) {
            auto d = bfs_distances(g, u);
            long long s = 0;
            for (std::int32_t x : d.dist) {
                if (x == kUnreachable) throw std::invalid_argument("graph is not connected");
                s += x;
            }
            sum[u] = s;
        }
    });
    NodeId best = 0;
    for (NodeId u = 1; u < n; ++u)
        if (sum[u] < sum[best]) best = u;
    return best;
}

inline ExpansionTrace expand_once(const Graph& g, const ExpansionConfig& cfg, Rng& rng) {
    NodeId forced = cfg.seed_mode == SeedMode::MostCentral ? most_central_node(g) : -1;
    DistanceCache cache(g);
    return detail::expand_once_impl(g, cfg, rng, cache, forced);
}

/// Weighted boundary draw used by the expansion step: picks a node outside s
/// with probability proportional to its number of neighbors inside s.
inline NodeId pick_boundary_node(const Graph& g, const NodeSet& s, Rng& rng) {
    std::vector<long long> cum;
    std::vector<NodeId> nodes;
    long long total = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (s.contains(u)) continue;
        long long c = 0;
        for (NodeId w : g.neighbors(u))
            if (s.contains(w)) ++c;
        if (c > 0) {
            total += c;
            cum.push_back(total);
            nodes.push_back(u);
        }
    }
    if (total == 0) throw std::invalid_argument("no boundary edges");
    long long r = static_cast<long long>(rng.below(static_cast<std::uint64_t>(total)));
    std::size_t idx = std::upper_bound(cum.begin(), cum.end(), r) - cum.begin();
    return nodes[idx];
}

/// Independent runs from streams derived from (rng_seed, run index);
/// results do not depend on the parallel schedule.
inline std::pair<std::vector<ExpansionTrace>, MembershipFrequency>
expand_ensemble(const Graph& g, const ExpansionConfig& cfg) {
    if (cfg.runs < 1) throw std::invalid_argument("runs must be positive");
    NodeId n = g.node_count();
    NodeId forced = cfg.seed_mode == SeedMode::MostCentral ? most_central_node(g) : -1;

    std::optional<DistanceMatrix> matrix;
    std::size_t need = static_cast<std::size_t>(n) * n * sizeof(std::int16_t);
    if (n <= 32000 && need <= cfg.distance_matrix_budget) matrix.emplace(DistanceMatrix::build(g));

    std::vector<ExpansionTrace> traces(cfg.runs);
    parallel_blocks(cfg.runs, [&](int, long long begin, long long end) {
        for (long long r = begin; r < end; ++r) {
            Rng rng = Rng::stream(cfg.rng_seed, static_cast<std::uint64_t>(r));
            if (matrix) {
                detail::MatrixProvider prov{&*matrix};
                traces[r] = detail::expand_once_impl(g, cfg, rng, prov, forced);
            } else {
                DistanceCache cache(g);
                traces[r] = detail::expand_once_impl(g, cfg, rng, cache, forced);
            }
        }
    });

    MembershipFrequency freq;
    freq.fraction.assign(n, 0.0);
    for (const auto& tr : traces)
        for (NodeId v : tr.membership_at_checkpoint.members()) freq.fraction[v] += 1.0;
    for (double& f : freq.fraction) f /= cfg.runs;
    return {std::move(traces), std::move(freq)};
}

/// Per-step mean and 99% normal-approximation confidence band
/// (mean +- 2.576 * stderr). Covered traces contribute s = 1 and their final
/// diameter beyond coverage; truncated uncovered traces stop contributing.
inline AggregatedCurve aggregate_curves(const std::vector<ExpansionTrace>& traces) {
    if (traces.empty()) throw std::invalid_argument("no traces");
    int horizon = 0;
    for (const auto& tr : traces) horizon = std::max(horizon, tr.steps());

    AggregatedCurve out;
    std::vector<double> vals_s, vals_d;
    for (int t = 0; t <= horizon; ++t) {
        vals_s.clear();
        vals_d.clear();
        for (const auto& tr : traces) {
            if (t <= tr.steps()) {
                vals_s.push_back(tr.s(t));
                vals_d.push_back(tr.diameters[t]);
            } else if (tr.covered()) {
                vals_s.push_back(1.0);
                vals_d.push_back(tr.diameters.back());
            }
        }
        auto push = [](const std::vector<double>& v, std::vector<double>& mean_v,
                       std::vector<double>& lo_v, std::vector<double>& hi_v) {
            bool all_equal = true;
            for (double x : v)
                if (x != v.front()) {
                    all_equal = false;
                    break;
                }
            if (all_equal) {
                mean_v.push_back(v.front());
                lo_v.push_back(v.front());
                hi_v.push_back(v.front());
                return;
            }
            double mean = 0;
            for (double x : v) mean += x;
            mean /= static_cast<double>(v.size());
            double var = 0;
            for (double x : v) var += (x - mean) * (x - mean);
            double stderr_ = v.size() > 1
                                 ? std::sqrt(var / (static_cast<double>(v.size()) - 1)) /
                                       std::sqrt(static_cast<double>(v.size()))
                                 : 0.0;
            mean_v.push_back(mean);
            lo_v.push_back(mean - 2.576 * stderr_);
            hi_v.push_back(mean + 2.576 * stderr_);
        };
        push(vals_s, out.mean_s, out.lo_s, out.hi_s);
        push(vals_d, out.mean_d, out.lo_d, out.hi_d);
        out.runs_at.push_back(static_cast<int>(vals_s.size()));
    }
    return out;
}

} // namespace convexity
