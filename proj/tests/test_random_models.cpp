#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "convexity/random_models.hpp"
#include "convexity/stats.hpp"
#include "oracles.hpp"

using namespace convexity;

namespace {
std::multiset<int> degree_multiset(const Graph& g) {
    std::multiset<int> out;
    for (NodeId u = 0; u < g.node_count(); ++u) out.insert(g.degree(u));
    return out;
}

std::set<std::pair<NodeId, NodeId>> edge_set(const Graph& g) {
    std::set<std::pair<NodeId, NodeId>> out;
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (NodeId v : g.neighbors(u))
            if (u < v) out.emplace(u, v);
    return out;
}

bool is_simple(const Graph& g) {
    for (NodeId u = 0; u < g.node_count(); ++u) {
        auto nb = g.neighbors(u);
        for (std::size_t i = 0; i < nb.size(); ++i) {
            if (nb[i] == u) return false;
            if (i > 0 && nb[i] == nb[i - 1]) return false;
        }
    }
    return true;
}
} // namespace

TEST_CASE("gen_er_connected basic contracts") {
    Rng rng(100);
    SUBCASE("spanning-tree edge budget forces a tree") {
        Graph g = gen_er_connected(10, 9, rng);
        CHECK(g.node_count() == 10);
        CHECK(g.edge_count() == 9);
        CHECK(is_connected(g));
    }
    SUBCASE("full edge budget gives the complete graph") {
        Graph g = gen_er_connected(5, 10, rng);
        for (NodeId u = 0; u < 5; ++u) CHECK(g.degree(u) == 4);
    }
    SUBCASE("moderate density: connected, simple, exact m") {
        Graph g = gen_er_connected(1000, 2500, rng);
        CHECK(g.node_count() == 1000);
        CHECK(g.edge_count() == 2500);
        CHECK(is_connected(g));
        CHECK(is_simple(g));
        long long degsum = 0;
        for (NodeId u = 0; u < 1000; ++u) degsum += g.degree(u);
        CHECK(degsum == 5000);
    }
    SUBCASE("bounds are rejected") {
        CHECK_THROWS_AS(gen_er_connected(10, 8, rng), std::invalid_argument);
        CHECK_THROWS_AS(gen_er_connected(10, 46, rng), std::invalid_argument);
    }
    SUBCASE("rejection cap fires for hopeless parameters") {
        CHECK_THROWS_WITH_AS(gen_er_connected(200, 199, rng, 3), "connectivity rejection cap",
                             std::runtime_error);
    }
}

TEST_CASE("gen_er_connected degree spread matches the binomial null") {
    Rng rng(101);
    const int n = 300;
    const long long m = 900;
    const int reps = 40;
    double p = 2.0 * static_cast<double>(m) / (static_cast<double>(n) * (n - 1));
    double want_var = static_cast<double>(n - 1) * p * (1 - p);
    std::vector<double> vars;
    for (int r = 0; r < reps; ++r) {
        Graph g = gen_er_connected(n, m, rng);
        double mean = 2.0 * static_cast<double>(m) / n;
        double var = 0;
        for (NodeId u = 0; u < n; ++u) {
            double d = g.degree(u) - mean;
            var += d * d;
        }
        vars.push_back(var / (n - 1));
    }
    double mean_var = 0;
    for (double v : vars) mean_var += v;
    mean_var /= reps;
    double sd = 0;
    for (double v : vars) sd += (v - mean_var) * (v - mean_var);
    sd = std::sqrt(sd / (reps - 1));
    CHECK(std::abs(mean_var - want_var) < 3 * sd / std::sqrt(static_cast<double>(reps)) + 0.05);
}

TEST_CASE("gen_gnp_connected stays simple and connected") {
    Rng rng(102);
    for (int rep = 0; rep < 5; ++rep) {
        Graph g = gen_gnp_connected(60, 0.08, rng);
        CHECK(g.node_count() == 60);
        CHECK(is_connected(g));
        CHECK(is_simple(g));
    }
}

TEST_CASE("rewire leaves the triangle alone") {
    Rng rng(103);
    Graph g = oracle::complete_graph(3);
    Graph r = rewire_preserving_degrees(g, rng);
    CHECK(edge_set(r) == edge_set(g));
}

TEST_CASE("rewire preserves degrees, simplicity, connectivity") {
    Rng rng(104);
    for (int rep = 0; rep < 8; ++rep) {
        Graph g = oracle::random_connected_graph(40, 40, rng);
        Graph r = rewire_preserving_degrees(g, rng);
        CHECK(degree_multiset(r) == degree_multiset(g));
        CHECK(is_connected(r));
        CHECK(is_simple(r));
        CHECK(r.edge_count() == g.edge_count());
    }
}

TEST_CASE("rewire invariants hold after every accepted swap") {
    Rng rng(105);
    Graph g = oracle::random_connected_graph(18, 14, rng);
    auto degs = degree_multiset(g);
    for (int step = 0; step < 150; ++step) {
        g = rewire_preserving_degrees(g, rng, 1);
        CHECK(degree_multiset(g) == degs);
        CHECK(is_connected(g));
        CHECK(is_simple(g));
    }
}

TEST_CASE("rewire actually moves edges when swaps exist") {
    Rng rng(106);
    Graph g = oracle::cycle_graph(12);
    Graph r = rewire_preserving_degrees(g, rng);
    CHECK(edge_set(r) != edge_set(g));
}

TEST_CASE("four-path degrees admit only a path") {
    Rng rng(107);
    Graph g = oracle::path_graph(4);
    Graph r = rewire_preserving_degrees(g, rng, 200);
    CHECK(degree_multiset(r) == std::multiset<int>{1, 1, 2, 2});
    CHECK(is_connected(r));
    CHECK(is_simple(r));
}

TEST_CASE("prior formulas: limits and spot values") {
    SUBCASE("clique classes are one at any density") {
        auto P = prior_graphlet_convexity(50, 0.3);
        CHECK(P[0] == 1.0);
        CHECK(P[2] == 1.0);
        CHECK(P[8] == 1.0);
    }
    SUBCASE("sparse limit sends every prior to one") {
        auto P = prior_graphlet_convexity(100, 1e-7);
        for (double v : P) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("path-3 prior at n=100, p=0.05") {
        auto P = prior_graphlet_convexity(100, 0.05);
        CHECK(P[1] == doctest::Approx(std::pow(1 - 0.0025, 97)).epsilon(1e-12));
        CHECK(P[1] == doctest::Approx(0.7844).epsilon(1e-3));
    }
    SUBCASE("all priors stay inside [0, 1]") {
        for (double p : {0.01, 0.1, 0.3, 0.6, 0.9}) {
            auto P = prior_graphlet_convexity(40, p);
            for (double v : P) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
            CHECK(prior_path_convexity_exact(40, p) >= 0.0);
            CHECK(prior_path_convexity_exact(40, p) <= 1.0);
        }
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(prior_graphlet_convexity(4, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(prior_graphlet_convexity(10, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(prior_graphlet_convexity(10, 1.0), std::invalid_argument);
    }
}

TEST_CASE("expected_graphlet_counts closed cases") {
    SUBCASE("p=1 leaves only cliques") {
        auto g = expected_graphlet_counts(10, 1.0);
        CHECK(g[8] == doctest::Approx(210.0)); // C(10,4)
        CHECK(g[0] == doctest::Approx(45.0));
        CHECK(g[2] == doctest::Approx(120.0));
        for (int i : {1, 3, 4, 5, 6, 7}) CHECK(g[i] == doctest::Approx(0.0));
    }
    SUBCASE("triangles at n=6, p=0.5") {
        auto g = expected_graphlet_counts(6, 0.5);
        CHECK(g[2] == doctest::Approx(2.5)); // C(6,3)/8
    }
}

TEST_CASE("labeled-copy counts match exhaustive enumeration") {
    // count labeled spanning connected graphs per class on 2..4 fixed vertices
    std::array<long long, 9> counts{};
    counts[0] = 1; // single edge on two labeled vertices
    {
        const std::pair<int, int> pairs3[3] = {{0, 1}, {0, 2}, {1, 2}};
        for (std::uint32_t mask = 0; mask < 8; ++mask) {
            std::vector<int> deg(3, 0);
            int edges = 0;
            for (int b = 0; b < 3; ++b)
                if (mask & (1u << b)) {
                    ++deg[pairs3[b].first];
                    ++deg[pairs3[b].second];
                    ++edges;
                }
            if (std::count(deg.begin(), deg.end(), 0) > 0) continue;
            if (edges < 2) continue;
            ++counts[classify_graphlet(3, edges, *std::max_element(deg.begin(), deg.end()))];
        }
    }
    {
        const std::pair<int, int> pairs4[6] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
        for (std::uint32_t mask = 0; mask < 64; ++mask) {
            std::vector<int> deg(4, 0);
            std::uint32_t adj[4] = {};
            int edges = 0;
            for (int b = 0; b < 6; ++b)
                if (mask & (1u << b)) {
                    auto [u, v] = pairs4[b];
                    ++deg[u];
                    ++deg[v];
                    adj[u] |= 1u << v;
                    adj[v] |= 1u << u;
                    ++edges;
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
            ++counts[classify_graphlet(4, edges, *std::max_element(deg.begin(), deg.end()))];
        }
    }
    for (int i = 0; i < 9; ++i) CHECK(counts[i] == kGraphletClasses[i].labeled_copies);
}

TEST_CASE("expected counts match the mean census over random graphs") {
    // unconditioned G(6, 0.5) ensemble against the closed-form expectations
    Rng rng(108);
    const int reps = 4000;
    std::array<double, 9> mean{};
    std::array<double, 9> m2{};
    for (int r = 0; r < reps; ++r) {
        std::vector<std::pair<Label, Label>> edges;
        for (int u = 0; u < 6; ++u)
            for (int v = u + 1; v < 6; ++v)
                if (rng.bernoulli(0.5)) edges.emplace_back(u, v);
        oracle::CensusCounts cc{};
        if (!edges.empty()) cc = oracle::census_bruteforce(build_graph(edges));
        for (int i = 0; i < 9; ++i) {
            double x = static_cast<double>(cc.induced[i]);
            mean[i] += x;
            m2[i] += x * x;
        }
    }
    auto want = expected_graphlet_counts(6, 0.5);
    for (int i = 0; i < 9; ++i) {
        mean[i] /= reps;
        double var = m2[i] / reps - mean[i] * mean[i];
        double se = std::sqrt(std::max(var, 1e-9) / reps);
        CHECK(std::abs(mean[i] - want[i]) < 3 * se + 0.01);
    }
}

TEST_CASE("class-wise priors agree with Monte Carlo at n=40, p=0.1") {
    const long long n = 40;
    const double p = 0.1;
    const int reps = 200;
    std::array<double, 9> target{};
    {
        auto P = prior_graphlet_convexity(n, p);
        for (int i = 0; i < 9; ++i) target[i] = P[i];
        target[3] = prior_path_convexity_exact(n, p);
    }
    std::array<std::vector<long long>, 9> pg, pc;
    Rng rng(110);
    for (int r = 0; r < reps; ++r) {
        Graph g = gen_gnp_connected(static_cast<NodeId>(n), p, rng);
        auto c = census(g);
        for (int i = 0; i < 9; ++i) {
            pg[i].push_back(c.induced[i]);
            pc[i].push_back(c.convex[i]);
        }
    }
    for (int i = 0; i < 9; ++i) {
        long long sum_g = 0, sum_c = 0;
        for (int r = 0; r < reps; ++r) {
            sum_g += pg[i][r];
            sum_c += pc[i][r];
        }
        if (sum_g < 30) continue;
        double frac = static_cast<double>(sum_c) / sum_g;
        double resid2 = 0;
        for (int r = 0; r < reps; ++r) {
            double d = static_cast<double>(pc[i][r]) - frac * static_cast<double>(pg[i][r]);
            resid2 += d * d;
        }
        double se = std::sqrt(resid2 * reps / (reps - 1.0)) / sum_g;
        INFO("class ", i, ": ", frac, " vs ", target[i], " se ", se);
        CHECK(std::abs(frac - target[i]) <= 3 * se + 1e-12);
    }
}

TEST_CASE("overall prior reproduces published-scale values") {
    CHECK(prior_overall(4941, 2.67) * 100 == doctest::Approx(99.4).epsilon(0.005));
    CHECK(prior_overall(1222, 27.36) * 100 == doctest::Approx(6.0).epsilon(0.08));
    CHECK(prior_overall(183, 26.60) * 100 == doctest::Approx(0.3).epsilon(0.9));
}

TEST_CASE("local convexity threshold") {
    CHECK(local_convexity_threshold(4941, 2.67) == doctest::Approx(8.66).epsilon(0.002));
    CHECK(local_convexity_threshold(183, 26.60) == doctest::Approx(1.59).epsilon(0.005));
    CHECK(local_convexity_threshold(5, 5.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(local_convexity_threshold(100, 1.0), std::invalid_argument);
}

TEST_CASE("expansion threshold") {
    SUBCASE("closed root") {
        CHECK(expansion_threshold(24, 2.0) == doctest::Approx(4.0).epsilon(1e-7));
    }
    SUBCASE("residual is tiny") {
        for (auto [n, k] : std::vector<std::pair<long long, double>>{
                 {4941, 2.67}, {1039, 2.51}, {379, 4.82}, {767, 4.52}, {3747, 4.14},
                 {1572, 21.90}, {1878, 5.76}, {1222, 27.36}, {183, 26.60}}) {
            double s = expansion_threshold(n, k);
            double lhs = std::pow(k, std::sqrt(s)) * s * (s - 1) / 2;
            CHECK(std::abs(lhs - static_cast<double>(n)) / static_cast<double>(n) < 1e-8);
            double thr = local_convexity_threshold(n, k);
            CHECK(s >= thr * 0.999);
            CHECK(s <= thr * thr * 1.001);
        }
    }
    SUBCASE("monotone in n") {
        CHECK(expansion_threshold(2000, 5.0) > expansion_threshold(1000, 5.0));
    }
    SUBCASE("no root when n is too small") {
        CHECK_THROWS_AS(expansion_threshold(10, 9.0), std::runtime_error);
    }
}

TEST_CASE("sample_connected_induced") {
    Rng rng(109);
    SUBCASE("complete graphs and trees are fully convex") {
        Graph k = oracle::complete_graph(12);
        auto r = sample_connected_induced(k, 4, 200, rng);
        CHECK(r.fraction == doctest::Approx(1.0));
        Graph t = oracle::random_tree(30, rng);
        auto rt = sample_connected_induced(t, 5, 200, rng);
        CHECK(rt.fraction == doctest::Approx(1.0));
        CHECK(rt.standard_error == doctest::Approx(0.0));
    }
    SUBCASE("triples in a sparse random graph match the analytic blend") {
        Graph g = gen_er_connected(500, 2000, rng);
        auto r = sample_connected_induced(g, 3, 4000, rng);
        double p = 2.0 * 2000 / (500.0 * 499.0);
        auto P = prior_graphlet_convexity(500, p);
        auto gt = expected_graphlet_counts(500, p);
        double blend = (gt[1] * P[1] + gt[2] * P[2]) / (gt[1] + gt[2]);
        CHECK(std::abs(r.fraction - blend) < 3 * r.standard_error + 0.02);
    }
    SUBCASE("size bounds") {
        Graph g = oracle::cycle_graph(6);
        CHECK_THROWS_AS(sample_connected_induced(g, 1, 10, rng), std::invalid_argument);
        CHECK_THROWS_AS(sample_connected_induced(g, 7, 10, rng), std::invalid_argument);
    }
    SUBCASE("attempt cap") {
        Graph g = oracle::path_graph(100);
        CHECK_THROWS_AS(sample_connected_induced(g, 50, 10, rng, 5), std::runtime_error);
    }
}
