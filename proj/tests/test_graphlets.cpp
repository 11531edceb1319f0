#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>

#include "convexity/graphlets.hpp"
#include "oracles.hpp"

using namespace convexity;

namespace {

// reference adjacency masks (on vertices 0..3) for the nine classes
const std::vector<std::vector<std::pair<int, int>>> kReference = {
    {{0, 1}},                                                 // edge
    {{0, 1}, {1, 2}},                                         // path-3
    {{0, 1}, {1, 2}, {0, 2}},                                 // triangle
    {{0, 1}, {1, 2}, {2, 3}},                                 // path-4
    {{0, 1}, {0, 2}, {0, 3}},                                 // star
    {{0, 1}, {1, 2}, {2, 3}, {3, 0}},                         // cycle
    {{0, 1}, {1, 2}, {0, 2}, {2, 3}},                         // triangle + pendant
    {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {1, 3}},                 // 4-clique minus one edge
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}},         // 4-clique
};

bool isomorphic_small(int n, const std::vector<std::pair<int, int>>& a,
                      const std::vector<std::pair<int, int>>& b) {
    if (a.size() != b.size()) return false;
    auto mask_of = [n](const std::vector<std::pair<int, int>>& edges, const std::vector<int>& perm) {
        std::uint32_t m = 0;
        for (auto [u, v] : edges) {
            int x = perm[u], y = perm[v];
            m |= 1u << (std::min(x, y) * n + std::max(x, y));
        }
        return m;
    };
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::vector<int> ident = perm;
    std::uint32_t target = mask_of(b, ident);
    do {
        if (mask_of(a, perm) == target) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

} // namespace

TEST_CASE("classification is consistent with isomorphism on all nine classes") {
    for (int i = 0; i < 9; ++i) {
        const auto& edges = kReference[i];
        int size = kGraphletClasses[i].size;
        std::vector<int> deg(size, 0);
        for (auto [u, v] : edges) {
            ++deg[u];
            ++deg[v];
        }
        int cls = classify_graphlet(size, static_cast<int>(edges.size()),
                                    *std::max_element(deg.begin(), deg.end()));
        CHECK(cls == i);
        for (int j = 0; j < 9; ++j) {
            if (kGraphletClasses[j].size != size) continue;
            CHECK(isomorphic_small(size, kReference[i], kReference[j]) == (i == j));
        }
    }
}

TEST_CASE("every connected graph on four labeled vertices classifies like its reference") {
    const std::pair<int, int> pairs[6] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (std::uint32_t mask = 0; mask < 64; ++mask) {
        std::vector<std::pair<int, int>> edges;
        for (int b = 0; b < 6; ++b)
            if (mask & (1u << b)) edges.push_back(pairs[b]);
        // keep graphs that connect all four vertices
        std::vector<int> deg(4, 0);
        std::uint32_t adj[4] = {0, 0, 0, 0};
        for (auto [u, v] : edges) {
            ++deg[u];
            ++deg[v];
            adj[u] |= 1u << v;
            adj[v] |= 1u << u;
        }
        std::uint32_t seen = 1, frontier = 1;
        while (frontier) {
            std::uint32_t next = 0;
            for (int u = 0; u < 4; ++u)
                if (frontier & (1u << u)) next |= adj[u] & ~seen;
            seen |= next;
            frontier = next;
        }
        if (seen != 0xF) continue;
        int cls = classify_graphlet(4, static_cast<int>(edges.size()),
                                    *std::max_element(deg.begin(), deg.end()));
        CHECK(isomorphic_small(4, edges, kReference[cls]));
    }
}

TEST_CASE("census on closed-form graphs") {
    SUBCASE("triangle") {
        auto c = census(oracle::complete_graph(3));
        CHECK(c.induced == std::array<long long, 9>{3, 0, 1, 0, 0, 0, 0, 0, 0});
        CHECK(c.convex == c.induced);
    }
    SUBCASE("three-leaf star") {
        auto c = census(oracle::star_graph(3));
        CHECK(c.induced == std::array<long long, 9>{3, 3, 0, 0, 1, 0, 0, 0, 0});
        CHECK(c.convex == c.induced);
    }
    SUBCASE("four-cycle") {
        auto c = census(oracle::cycle_graph(4));
        CHECK(c.induced == std::array<long long, 9>{4, 4, 0, 0, 0, 1, 0, 0, 0});
        CHECK(c.convex == std::array<long long, 9>{4, 0, 0, 0, 0, 1, 0, 0, 0});
        auto probs = convex_probabilities(c);
        CHECK(*probs.per_class[1] == doctest::Approx(0.0));
        CHECK(*probs.per_class[5] == doctest::Approx(1.0));
        CHECK_FALSE(probs.per_class[3].has_value());
        CHECK(*probs.overall == doctest::Approx(0.2));
    }
    SUBCASE("five-cycle paths are all convex") {
        auto c = census(oracle::cycle_graph(5));
        auto probs = convex_probabilities(c);
        CHECK(c.induced[1] == 5);
        CHECK(*probs.per_class[1] == doctest::Approx(1.0));
    }
}

TEST_CASE("census matches exhaustive subset iteration") {
    Rng rng(27);
    for (int rep = 0; rep < 30; ++rep) {
        int n = 5 + static_cast<int>(rng.below(8)); // up to 12
        Graph g = oracle::random_connected_graph(n, static_cast<int>(rng.below(14)), rng);
        auto fast = census(g);
        auto slow = oracle::census_bruteforce(g);
        CHECK(fast.induced == slow.induced);
        CHECK(fast.convex == slow.convex);
    }
}

TEST_CASE("clique classes are always fully convex") {
    Rng rng(28);
    for (int rep = 0; rep < 10; ++rep) {
        Graph g = oracle::random_connected_graph(16, 24, rng);
        auto c = census(g);
        CHECK(c.convex[0] == c.induced[0]);
        CHECK(c.convex[2] == c.induced[2]);
        CHECK(c.convex[8] == c.induced[8]);
    }
}

TEST_CASE("size-3 census totals equal the brute-force connected-triple count") {
    Rng rng(29);
    for (int rep = 0; rep < 10; ++rep) {
        int n = 6 + static_cast<int>(rng.below(6));
        Graph g = oracle::random_connected_graph(n, static_cast<int>(rng.below(12)), rng);
        auto c = census(g);
        oracle::SmallGraph sg(g);
        long long triples = 0;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                for (int d = b + 1; d < n; ++d)
                    if (sg.connected_induced((1u << a) | (1u << b) | (1u << d))) ++triples;
        CHECK(c.induced[1] + c.induced[2] == triples);
    }
}

TEST_CASE("dense-table and truncated-BFS census paths are identical") {
    Rng rng(30);
    Graph g = oracle::random_connected_graph(40, 60, rng);
    CensusOptions with_matrix;
    CensusOptions without_matrix;
    without_matrix.matrix_node_limit = 0;
    auto a = census(g, with_matrix);
    auto b = census(g, without_matrix);
    CHECK(a.induced == b.induced);
    CHECK(a.convex == b.convex);
}

TEST_CASE("census rejects disconnected graphs and bad sample sizes") {
    Graph g2 = build_graph({{0, 1}, {2, 3}});
    CHECK_THROWS_AS(census(g2), std::invalid_argument);
    CensusOptions opt;
    opt.mode = CensusMode::Sampled;
    opt.sample_size = 0;
    CHECK_THROWS_AS(census(oracle::cycle_graph(5), opt), std::invalid_argument);
}

TEST_CASE("sampled census tracks the exact one") {
    Rng rng(31);
    Graph g = oracle::random_connected_graph(45, 80, rng);
    auto exact = census(g);
    CensusOptions opt;
    opt.mode = CensusMode::Sampled;
    opt.sample_size = 400;
    opt.rng_seed = 999;
    auto sampled = census(g, opt);

    CHECK(sampled.induced == exact.induced); // instance counts stay exact
    CHECK(sampled.sample_size == std::min<long long>(400, [&] {
              long long quads = 0;
              for (int i = 3; i < 9; ++i) quads += exact.induced[i];
              return quads;
          }()));
    auto pe = convex_probabilities(exact);
    auto ps = convex_probabilities(sampled);
    for (int i = 3; i < 9; ++i) {
        if (!pe.per_class[i] || !ps.per_class[i] || sampled.sampled[i] < 20) continue;
        double f = *ps.per_class[i];
        double se = std::sqrt(std::max(f * (1 - f), 0.01) / sampled.sampled[i]);
        CHECK(std::abs(f - *pe.per_class[i]) < 4 * se + 1e-9);
    }
    // determinism
    auto again = census(g, opt);
    CHECK(again.sampled_convex == sampled.sampled_convex);
}
