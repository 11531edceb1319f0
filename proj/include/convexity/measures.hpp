#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "convexity/expansion.hpp"
#include "convexity/graph.hpp"
#include "convexity/stats.hpp"

namespace convexity {

/// Growth-based convexity score of a single run:
///   X_c = 1 - sum_t max{ds(t) - 1/n, 0}^(1/c)
/// over recorded steps, truncated to max_terms. Computed from integer size
/// deltas so that runs growing one node per step give exactly 1.
inline double x_convexity(const ExpansionTrace& trace, double c, int max_terms = 100) {
    if (c < 1.0) throw std::invalid_argument("c must be at least 1");
    if (trace.node_count < 1) throw std::invalid_argument("empty trace");
    double n = static_cast<double>(trace.node_count);
    int t_end = std::min(trace.steps(), max_terms);
    double sum = 0.0;
    for (int t = 1; t <= t_end; ++t) {
        long long delta = static_cast<long long>(trace.sizes[t]) - trace.sizes[t - 1] - 1;
        if (delta <= 0) continue;
        sum += std::pow(static_cast<double>(delta) / n, 1.0 / c);
    }
    return 1.0 - sum;
}

inline double mean_x_convexity(const std::vector<ExpansionTrace>& traces, double c,
                               int max_terms = 100) {
    if (traces.empty()) throw std::invalid_argument("no traces");
    double sum = 0.0;
    for (const auto& tr : traces) sum += x_convexity(tr, c, max_terms);
    return sum / static_cast<double>(traces.size());
}

enum class MaxConvexMode { StrictC1, RelaxedCt };

/// Largest subset size whose growth is still essentially one node per step:
/// L = 1 + max{t : s_lower(t) < (t + c + 1)/n} with c = 1 (strict) or c = t
/// (relaxed), evaluated on the lower 99% confidence bound of s(t).
inline int max_convex_size(const AggregatedCurve& curve, NodeId n, MaxConvexMode mode) {
    if (curve.mean_s.empty()) throw std::invalid_argument("empty curve");
    int best = -1;
    for (int t = 0; t < static_cast<int>(curve.mean_s.size()); ++t) {
        double c = mode == MaxConvexMode::StrictC1 ? 1.0 : static_cast<double>(t);
        double bound = (static_cast<double>(t) + c + 1.0) / static_cast<double>(n);
        if (curve.lo_s[t] < bound) best = std::max(best, t);
    }
    return best < 0 ? 1 : best + 1;
}

struct ConvexityMeasures {
    std::vector<std::pair<double, double>> x_c; // (c, ensemble mean X_c)
    int l_1 = 0;
    int l_t = 0;
    double t_prime_mean = std::numeric_limits<double>::quiet_NaN();
};

inline ConvexityMeasures compute_measures(const std::vector<ExpansionTrace>& traces,
                                          const AggregatedCurve& curve, NodeId n,
                                          const std::vector<double>& c_values,
                                          int max_terms = 100) {
    ConvexityMeasures m;
    for (double c : c_values) m.x_c.emplace_back(c, mean_x_convexity(traces, c, max_terms));
    m.l_1 = max_convex_size(curve, n, MaxConvexMode::StrictC1);
    m.l_t = max_convex_size(curve, n, MaxConvexMode::RelaxedCt);
    double sum = 0;
    long long covered = 0;
    for (const auto& tr : traces)
        if (tr.covered()) {
            sum += tr.covered_at;
            ++covered;
        }
    if (covered > 0) m.t_prime_mean = sum / static_cast<double>(covered);
    return m;
}

struct CorePeripheryPartition {
    NodeSet core;
    NodeSet periphery;
    double threshold = 0.9;
};

/// Nodes present in at least `threshold` of the checkpoint sets form the
/// core; the rest is the periphery.
inline CorePeripheryPartition detect_c_core(const MembershipFrequency& freq,
                                            double threshold = 0.9) {
    NodeId n = static_cast<NodeId>(freq.fraction.size());
    CorePeripheryPartition part;
    part.threshold = threshold;
    part.core = NodeSet(n);
    part.periphery = NodeSet(n);
    for (NodeId v = 0; v < n; ++v) {
        if (freq.fraction[v] >= threshold)
            part.core.add(v);
        else
            part.periphery.add(v);
    }
    return part;
}

struct PartitionDensities {
    std::optional<double> core_core;
    std::optional<double> core_periphery;
    std::optional<double> periphery_periphery;
    long long edges_cc = 0, edges_cp = 0, edges_pp = 0;
    long long pairs_cc = 0, pairs_cp = 0, pairs_pp = 0;
};

/// Block edge densities: realized edges over possible pairs per block.
/// Blocks with no possible pairs stay undefined rather than zero.
inline PartitionDensities partition_densities(const Graph& g,
                                              const CorePeripheryPartition& part) {
    if (part.core.size() + part.periphery.size() != g.node_count())
        throw std::invalid_argument("partition does not cover the graph");
    PartitionDensities d;
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (NodeId v : g.neighbors(u)) {
            if (v <= u) continue;
            bool cu = part.core.contains(u), cv = part.core.contains(v);
            if (cu && cv)
                ++d.edges_cc;
            else if (cu || cv)
                ++d.edges_cp;
            else
                ++d.edges_pp;
        }
    long long nc = part.core.size(), np = part.periphery.size();
    d.pairs_cc = nc * (nc - 1) / 2;
    d.pairs_cp = nc * np;
    d.pairs_pp = np * (np - 1) / 2;
    if (d.pairs_cc > 0) d.core_core = static_cast<double>(d.edges_cc) / d.pairs_cc;
    if (d.pairs_cp > 0) d.core_periphery = static_cast<double>(d.edges_cp) / d.pairs_cp;
    if (d.pairs_pp > 0) d.periphery_periphery = static_cast<double>(d.edges_pp) / d.pairs_pp;
    return d;
}

struct KCoreComparisonRow {
    int k = 0;
    long long kcore_size = 0;
    long long intersection = 0;
    double share_of_ccore = 0;  // |ccore ∩ kcore| / |ccore|
    double share_of_kcore = 0;  // |ccore ∩ kcore| / |kcore|
    double jaccard = 0;
};

struct KCoreComparison {
    long long ccore_size = 0;
    std::vector<KCoreComparisonRow> rows; // k = 1 .. max core number
};

inline KCoreComparison compare_with_kcore(const Graph& g, const CorePeripheryPartition& part) {
    CoreNumbers kc = k_core(g);
    KCoreComparison cmp;
    cmp.ccore_size = part.core.size();
    for (int k = 1; k <= kc.max_core; ++k) {
        KCoreComparisonRow row;
        row.k = k;
        for (NodeId v = 0; v < g.node_count(); ++v) {
            if (kc.core[v] < k) continue;
            ++row.kcore_size;
            if (part.core.contains(v)) ++row.intersection;
        }
        long long uni = cmp.ccore_size + row.kcore_size - row.intersection;
        row.share_of_ccore =
            cmp.ccore_size > 0 ? static_cast<double>(row.intersection) / cmp.ccore_size : 0.0;
        row.share_of_kcore =
            row.kcore_size > 0 ? static_cast<double>(row.intersection) / row.kcore_size : 0.0;
        row.jaccard = uni > 0 ? static_cast<double>(row.intersection) / uni : 0.0;
        cmp.rows.push_back(row);
    }
    return cmp;
}

} // namespace convexity
